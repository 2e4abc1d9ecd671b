//! Parameterized descriptions of pairwise constraint families.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Tag of a constraint family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FamilyKind {
    Convex,
    SmoothConvexWeak,
    SmoothConvexTight,
    SmoothStronglyConvex,
    QuadraticClass,
    WeaklyConvexBounded,
    WeaklyConvexBoundedTight,
    GramLinearGeneral,
    ConsistForm,
    UniformlyConvex,
    HolderSmooth,
    SmoothPL,
    LipschitzHessian,
}

impl FamilyKind {
    pub const ALL: [FamilyKind; 13] = [
        FamilyKind::Convex,
        FamilyKind::SmoothConvexWeak,
        FamilyKind::SmoothConvexTight,
        FamilyKind::SmoothStronglyConvex,
        FamilyKind::QuadraticClass,
        FamilyKind::WeaklyConvexBounded,
        FamilyKind::WeaklyConvexBoundedTight,
        FamilyKind::GramLinearGeneral,
        FamilyKind::ConsistForm,
        FamilyKind::UniformlyConvex,
        FamilyKind::HolderSmooth,
        FamilyKind::SmoothPL,
        FamilyKind::LipschitzHessian,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::Convex => "Convex",
            FamilyKind::SmoothConvexWeak => "SmoothConvexWeak",
            FamilyKind::SmoothConvexTight => "SmoothConvexTight",
            FamilyKind::SmoothStronglyConvex => "SmoothStronglyConvex",
            FamilyKind::QuadraticClass => "QuadraticClass",
            FamilyKind::WeaklyConvexBounded => "WeaklyConvexBounded",
            FamilyKind::WeaklyConvexBoundedTight => "WeaklyConvexBoundedTight",
            FamilyKind::GramLinearGeneral => "GramLinearGeneral",
            FamilyKind::ConsistForm => "ConsistForm",
            FamilyKind::UniformlyConvex => "UniformlyConvex",
            FamilyKind::HolderSmooth => "HolderSmooth",
            FamilyKind::SmoothPL => "SmoothPL",
            FamilyKind::LipschitzHessian => "LipschitzHessian",
        }
    }

    /// Short command-line alias.
    pub fn alias(self) -> &'static str {
        match self {
            FamilyKind::Convex => "convex",
            FamilyKind::SmoothConvexWeak => "smooth-convex-weak",
            FamilyKind::SmoothConvexTight => "smooth-convex",
            FamilyKind::SmoothStronglyConvex => "ssc",
            FamilyKind::QuadraticClass => "quadratic",
            FamilyKind::WeaklyConvexBounded => "wc",
            FamilyKind::WeaklyConvexBoundedTight => "wc-tight",
            FamilyKind::GramLinearGeneral => "gram-linear",
            FamilyKind::ConsistForm => "consist",
            FamilyKind::UniformlyConvex => "uniformly-convex",
            FamilyKind::HolderSmooth => "holder",
            FamilyKind::SmoothPL => "smooth-pl",
            FamilyKind::LipschitzHessian => "lipschitz-hessian",
        }
    }

    /// Accepts the canonical name or the alias, case-insensitively.
    pub fn parse(s: &str) -> Option<FamilyKind> {
        let s = s.trim();
        Self::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s) || k.alias().eq_ignore_ascii_case(s))
    }

    /// Parameter names accepted by this kind, in canonical order.
    pub fn param_names(self) -> &'static [&'static str] {
        match self {
            FamilyKind::Convex => &[],
            FamilyKind::SmoothConvexWeak | FamilyKind::SmoothConvexTight => &["L"],
            FamilyKind::SmoothStronglyConvex => &["mu", "L"],
            FamilyKind::QuadraticClass => &["mu", "M"],
            FamilyKind::WeaklyConvexBounded | FamilyKind::WeaklyConvexBoundedTight => &["mu", "B"],
            FamilyKind::GramLinearGeneral => &["B", "C", "E", "F", "H", "I", "J"],
            FamilyKind::ConsistForm => &["alpha", "beta", "gamma"],
            FamilyKind::UniformlyConvex => &["mu", "p"],
            FamilyKind::HolderSmooth => &["L", "alpha", "exponent"],
            FamilyKind::SmoothPL => &["L", "mu", "f_star"],
            FamilyKind::LipschitzHessian => &["M"],
        }
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Free coefficients of the general Gram-linear constraint
/// `f_i >= f_j + B|g_i|^2 + C|g_j|^2 + D<g_j,g_i> + E|x_i|^2 + F|x_j|^2
///  + G<x_i,x_j> + H<g_i,x_i> + I<g_i,x_j> + J<g_j,x_i> + K<g_j,x_j>`.
/// `D`, `G`, `K` are dependent so that every single point satisfies it.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct GramCoefficients {
    pub b: f64,
    pub c: f64,
    pub e: f64,
    pub f: f64,
    pub h: f64,
    pub i: f64,
    pub j: f64,
}

impl GramCoefficients {
    pub fn d(&self) -> f64 {
        -(self.b + self.c)
    }

    pub fn g(&self) -> f64 {
        -(self.e + self.f)
    }

    pub fn k(&self) -> f64 {
        -(self.h + self.i + self.j)
    }

    /// Coefficients reproducing the smooth strongly convex constraint.
    pub fn smooth_strongly_convex(mu: f64, l: f64) -> Self {
        let k = 1.0 / (l - mu);
        GramCoefficients {
            b: k / 2.0,
            c: k / 2.0,
            e: mu * l * k / 2.0,
            f: mu * l * k / 2.0,
            h: -mu * k,
            i: mu * k,
            j: l * k,
        }
    }
}

/// A pairwise constraint family together with its parameters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FamilySpec", into = "FamilySpec")]
pub enum ConstraintFamily {
    Convex,
    SmoothConvexWeak {
        l: f64,
    },
    SmoothConvexTight {
        l: f64,
    },
    SmoothStronglyConvex {
        mu: f64,
        l: f64,
    },
    QuadraticClass {
        mu: f64,
        m: f64,
    },
    WeaklyConvexBounded {
        mu: f64,
        b: f64,
    },
    WeaklyConvexBoundedTight {
        mu: f64,
        b: f64,
    },
    GramLinearGeneral(GramCoefficients),
    ConsistForm {
        alpha: f64,
        beta: f64,
        gamma: f64,
    },
    UniformlyConvex {
        mu: f64,
        p: f64,
    },
    /// `exponent` defaults to `alpha + 1`.
    HolderSmooth {
        l: f64,
        alpha: f64,
        exponent: f64,
    },
    SmoothPL {
        l: f64,
        mu: f64,
        f_star: f64,
    },
    LipschitzHessian {
        m: f64,
    },
}

impl ConstraintFamily {
    pub fn kind(&self) -> FamilyKind {
        match self {
            ConstraintFamily::Convex => FamilyKind::Convex,
            ConstraintFamily::SmoothConvexWeak { .. } => FamilyKind::SmoothConvexWeak,
            ConstraintFamily::SmoothConvexTight { .. } => FamilyKind::SmoothConvexTight,
            ConstraintFamily::SmoothStronglyConvex { .. } => FamilyKind::SmoothStronglyConvex,
            ConstraintFamily::QuadraticClass { .. } => FamilyKind::QuadraticClass,
            ConstraintFamily::WeaklyConvexBounded { .. } => FamilyKind::WeaklyConvexBounded,
            ConstraintFamily::WeaklyConvexBoundedTight { .. } => {
                FamilyKind::WeaklyConvexBoundedTight
            }
            ConstraintFamily::GramLinearGeneral(_) => FamilyKind::GramLinearGeneral,
            ConstraintFamily::ConsistForm { .. } => FamilyKind::ConsistForm,
            ConstraintFamily::UniformlyConvex { .. } => FamilyKind::UniformlyConvex,
            ConstraintFamily::HolderSmooth { .. } => FamilyKind::HolderSmooth,
            ConstraintFamily::SmoothPL { .. } => FamilyKind::SmoothPL,
            ConstraintFamily::LipschitzHessian { .. } => FamilyKind::LipschitzHessian,
        }
    }

    /// Parameters as `(name, value)` pairs in canonical order.
    pub fn params(&self) -> Vec<(&'static str, f64)> {
        let vals: Vec<f64> = match *self {
            ConstraintFamily::Convex => Vec::new(),
            ConstraintFamily::SmoothConvexWeak { l }
            | ConstraintFamily::SmoothConvexTight { l } => {
                alloc::vec![l]
            }
            ConstraintFamily::SmoothStronglyConvex { mu, l } => alloc::vec![mu, l],
            ConstraintFamily::QuadraticClass { mu, m } => alloc::vec![mu, m],
            ConstraintFamily::WeaklyConvexBounded { mu, b }
            | ConstraintFamily::WeaklyConvexBoundedTight { mu, b } => alloc::vec![mu, b],
            ConstraintFamily::GramLinearGeneral(c) => {
                alloc::vec![c.b, c.c, c.e, c.f, c.h, c.i, c.j]
            }
            ConstraintFamily::ConsistForm { alpha, beta, gamma } => alloc::vec![alpha, beta, gamma],
            ConstraintFamily::UniformlyConvex { mu, p } => alloc::vec![mu, p],
            ConstraintFamily::HolderSmooth { l, alpha, exponent } => {
                alloc::vec![l, alpha, exponent]
            }
            ConstraintFamily::SmoothPL { l, mu, f_star } => alloc::vec![l, mu, f_star],
            ConstraintFamily::LipschitzHessian { m } => alloc::vec![m],
        };
        self.kind()
            .param_names()
            .iter()
            .copied()
            .zip(vals)
            .collect()
    }

    /// Builds and validates a family from a kind name and named parameters.
    ///
    /// Names are matched case-insensitively. Optional parameters: the Gram
    /// coefficients (default 0), `beta`/`gamma` of the consist form
    /// (default 0), the Hölder `exponent` (default `alpha + 1`) and `f_star`
    /// (default 0).
    pub fn from_params<'a, I>(kind: &str, params: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a str, f64)>,
    {
        let kind = FamilyKind::parse(kind).ok_or_else(|| Error::UnknownKind(kind.to_string()))?;
        let names = kind.param_names();
        let mut vals: Vec<Option<f64>> = alloc::vec![None; names.len()];
        for (name, v) in params {
            let pos = names
                .iter()
                .position(|n| n.eq_ignore_ascii_case(name))
                .ok_or_else(|| Error::UnknownParameter {
                    kind: kind.name(),
                    name: name.to_string(),
                })?;
            vals[pos] = Some(v);
        }
        let get = |k: usize| -> Result<f64> {
            vals[k].ok_or(Error::MissingParameter {
                kind: kind.name(),
                name: names[k],
            })
        };
        let opt = |k: usize, default: f64| vals[k].unwrap_or(default);
        let fam = match kind {
            FamilyKind::Convex => ConstraintFamily::Convex,
            FamilyKind::SmoothConvexWeak => ConstraintFamily::SmoothConvexWeak { l: get(0)? },
            FamilyKind::SmoothConvexTight => ConstraintFamily::SmoothConvexTight { l: get(0)? },
            FamilyKind::SmoothStronglyConvex => ConstraintFamily::SmoothStronglyConvex {
                mu: get(0)?,
                l: get(1)?,
            },
            FamilyKind::QuadraticClass => ConstraintFamily::QuadraticClass {
                mu: get(0)?,
                m: get(1)?,
            },
            FamilyKind::WeaklyConvexBounded => ConstraintFamily::WeaklyConvexBounded {
                mu: get(0)?,
                b: get(1)?,
            },
            FamilyKind::WeaklyConvexBoundedTight => ConstraintFamily::WeaklyConvexBoundedTight {
                mu: get(0)?,
                b: get(1)?,
            },
            FamilyKind::GramLinearGeneral => {
                ConstraintFamily::GramLinearGeneral(GramCoefficients {
                    b: opt(0, 0.0),
                    c: opt(1, 0.0),
                    e: opt(2, 0.0),
                    f: opt(3, 0.0),
                    h: opt(4, 0.0),
                    i: opt(5, 0.0),
                    j: opt(6, 0.0),
                })
            }
            FamilyKind::ConsistForm => ConstraintFamily::ConsistForm {
                alpha: get(0)?,
                beta: opt(1, 0.0),
                gamma: opt(2, 0.0),
            },
            FamilyKind::UniformlyConvex => ConstraintFamily::UniformlyConvex {
                mu: get(0)?,
                p: get(1)?,
            },
            FamilyKind::HolderSmooth => {
                let alpha = get(1)?;
                ConstraintFamily::HolderSmooth {
                    l: get(0)?,
                    alpha,
                    exponent: opt(2, alpha + 1.0),
                }
            }
            FamilyKind::SmoothPL => ConstraintFamily::SmoothPL {
                l: get(0)?,
                mu: get(1)?,
                f_star: opt(2, 0.0),
            },
            FamilyKind::LipschitzHessian => ConstraintFamily::LipschitzHessian { m: get(0)? },
        };
        fam.validate()?;
        Ok(fam)
    }

    /// Checks the parameter domain of the family.
    pub fn validate(&self) -> Result<()> {
        let params = self.params();
        if let Some((n, _)) = params.iter().find(|(_, v)| !v.is_finite()) {
            return Err(out_of_domain(self.kind(), &format!("{n} must be finite")));
        }
        let bad = |msg: &str| Err(out_of_domain(self.kind(), msg));
        match *self {
            ConstraintFamily::SmoothConvexWeak { l }
            | ConstraintFamily::SmoothConvexTight { l }
                if l <= 0.0 =>
            {
                bad("L > 0 required")
            }
            ConstraintFamily::SmoothStronglyConvex { mu, l } if mu >= l => bad("mu < L required"),
            ConstraintFamily::QuadraticClass { m, .. } if m <= 0.0 => bad("M > 0 required"),
            ConstraintFamily::WeaklyConvexBounded { mu, b }
            | ConstraintFamily::WeaklyConvexBoundedTight { mu, b }
                if mu < 0.0 || b < 0.0 =>
            {
                bad("mu >= 0 and B >= 0 required")
            }
            ConstraintFamily::ConsistForm { alpha, .. } if alpha < 0.0 => {
                bad("alpha >= 0 required")
            }
            ConstraintFamily::UniformlyConvex { mu, p } if p <= 2.0 || mu < 0.0 => {
                bad("p > 2 and mu >= 0 required")
            }
            ConstraintFamily::HolderSmooth { l, alpha, exponent }
                if !(alpha > 0.0 && alpha < 1.0) || l < 0.0 || exponent <= 1.0 =>
            {
                bad("alpha in (0,1), L >= 0 and exponent > 1 required")
            }
            ConstraintFamily::SmoothPL { l, mu, .. } if !(0.0 <= mu && mu <= l) => {
                bad("0 <= mu <= L required")
            }
            ConstraintFamily::LipschitzHessian { m } if m < 0.0 => bad("M >= 0 required"),
            _ => Ok(()),
        }
    }
}

fn out_of_domain(kind: FamilyKind, msg: &str) -> Error {
    Error::ParameterOutOfDomain(format!("{kind}: {msg}"))
}

/// Convenience entry point: parses `"Kind key=value ..."`.
pub fn family_from_spec(spec: &str) -> Result<ConstraintFamily> {
    spec.parse()
}

impl FromStr for ConstraintFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut words = s.split_whitespace();
        let kind = words
            .next()
            .ok_or_else(|| Error::UnknownKind(String::new()))?;
        let mut params = Vec::new();
        for w in words {
            let (k, v) = w.split_once('=').ok_or_else(|| {
                Error::ParameterOutOfDomain(format!("expected key=value, got `{w}`"))
            })?;
            let v: f64 = v
                .parse()
                .map_err(|_| Error::ParameterOutOfDomain(format!("`{v}` is not a number")))?;
            params.push((k, v));
        }
        ConstraintFamily::from_params(kind, params)
    }
}

impl fmt::Display for ConstraintFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.kind().name())?;
        for (n, v) in self.params() {
            write!(f, " {n}={v}")?;
        }
        Ok(())
    }
}

/// Serialized form: `{"kind": "...", "<param>": value, ...}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FamilySpec {
    pub kind: String,
    #[serde(flatten)]
    pub params: BTreeMap<String, f64>,
}

impl TryFrom<FamilySpec> for ConstraintFamily {
    type Error = Error;

    fn try_from(spec: FamilySpec) -> Result<Self> {
        ConstraintFamily::from_params(
            &spec.kind,
            spec.params.iter().map(|(k, v)| (k.as_str(), *v)),
        )
    }
}

impl From<ConstraintFamily> for FamilySpec {
    fn from(f: ConstraintFamily) -> Self {
        FamilySpec {
            kind: f.kind().name().to_string(),
            params: f
                .params()
                .into_iter()
                .map(|(k, v)| (k.to_string(), v))
                .collect(),
        }
    }
}

/// Family plus numerical settings shared by checks and searches.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProblemConfig {
    pub family: ConstraintFamily,
    pub tolerance: f64,
    pub seed: u64,
    pub budget: usize,
}

impl ProblemConfig {
    pub const DEFAULT_TOLERANCE: f64 = 1e-8;

    pub fn new(family: ConstraintFamily) -> Self {
        ProblemConfig {
            family,
            tolerance: Self::DEFAULT_TOLERANCE,
            seed: 0,
            budget: 5000,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self
    }

    pub fn with_tolerance(mut self, tol: f64) -> Result<Self> {
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(Error::ParameterOutOfDomain(format!(
                "tolerance must be positive, got {tol}"
            )));
        }
        self.tolerance = tol;
        Ok(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_wc_tight() {
        let f = family_from_spec("WeaklyConvexBoundedTight mu=1 B=1").unwrap();
        assert_eq!(
            f,
            ConstraintFamily::WeaklyConvexBoundedTight { mu: 1.0, b: 1.0 }
        );
        assert_eq!(family_from_spec("wc-tight MU=1 b=1").unwrap(), f);
    }

    #[test]
    fn rejects_mu_above_l() {
        let r = family_from_spec("SmoothStronglyConvex mu=2 L=1");
        assert!(matches!(r, Err(Error::ParameterOutOfDomain(_))));
    }

    #[test]
    fn fills_dependent_gram_coefficients() {
        let f = family_from_spec("GramLinearGeneral B=0 C=0 E=0 F=0 H=-1 I=0 J=0").unwrap();
        let ConstraintFamily::GramLinearGeneral(c) = f else {
            panic!()
        };
        assert_eq!((c.d(), c.g(), c.k()), (0.0, 0.0, 1.0));
    }

    #[test]
    fn unknown_kind_and_parameter() {
        assert!(matches!(
            family_from_spec("Banana"),
            Err(Error::UnknownKind(_))
        ));
        assert!(matches!(
            family_from_spec("convex mu=1"),
            Err(Error::UnknownParameter { .. })
        ));
        assert!(matches!(
            family_from_spec("wc mu=1"),
            Err(Error::MissingParameter { name: "B", .. })
        ));
    }

    #[test]
    fn holder_exponent_defaults_to_alpha_plus_one() {
        let f = family_from_spec("holder L=1 alpha=0.5").unwrap();
        assert_eq!(
            f,
            ConstraintFamily::HolderSmooth {
                l: 1.0,
                alpha: 0.5,
                exponent: 1.5
            }
        );
    }

    #[test]
    fn display_round_trips() {
        for s in [
            "ssc mu=0.5 L=2", "consist alpha=1 beta=-0.1 gamma=0", "smooth-pl L=1 mu=0.5",
        ] {
            let f = family_from_spec(s).unwrap();
            assert_eq!(family_from_spec(&f.to_string()).unwrap(), f);
        }
    }

    #[test]
    fn every_kind_has_unique_names() {
        for a in FamilyKind::ALL {
            assert_eq!(FamilyKind::parse(a.name()), Some(a));
            assert_eq!(FamilyKind::parse(a.alias()), Some(a));
        }
    }
}
