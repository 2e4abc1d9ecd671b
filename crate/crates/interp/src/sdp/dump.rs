//! Plain-text dump of an SDP instance, in the spirit of matrix-market
//! coordinate files (1-based indices, upper triangle only).
//!
//! ```text
//! %%sdp-instance gram_dim n_fvals n_constraints
//! obj G i j v          objective Gram entry
//! obj F k v            objective value coefficient
//! con r sense rhs label
//! row r G i j v
//! row r F k v
//! ```
//! The problem is `max <C,G> + c'F` subject to the listed rows and `G ⪰ 0`.

use std::io::{self, Write};

use interp_core::pep::{GramForm, SdpInstance, Sense};

fn entries(form: &GramForm, n: usize) -> Vec<(usize, usize, f64)> {
    let m = form.matrix(n);
    (0..n)
        .flat_map(|i| (i..n).map(move |j| (i, j)))
        .filter_map(|(i, j)| {
            let v = m[i * n + j];
            (v != 0.0).then_some((i + 1, j + 1, v))
        })
        .collect()
}

pub fn write_instance<W: Write>(inst: &SdpInstance, mut w: W) -> io::Result<()> {
    let n = inst.gram_dim;
    writeln!(
        w,
        "%%sdp-instance {} {} {}",
        n,
        inst.n_fvals,
        inst.constraints.len()
    )?;
    for (i, j, v) in entries(&inst.objective, n) {
        writeln!(w, "obj G {i} {j} {v:e}")?;
    }
    for &(k, v) in &inst.objective_f {
        writeln!(w, "obj F {} {v:e}", k + 1)?;
    }
    for (r, c) in inst.constraints.iter().enumerate() {
        let sense = match c.sense {
            Sense::Le => "<=",
            Sense::Ge => ">=",
            Sense::Eq => "=",
        };
        writeln!(w, "con {} {sense} {:e} {}", r + 1, c.rhs, c.label)?;
        for (i, j, v) in entries(&c.gram, n) {
            writeln!(w, "row {} G {i} {j} {v:e}", r + 1)?;
        }
        for &(k, v) in &c.fvals {
            writeln!(w, "row {} F {} {v:e}", r + 1, k + 1)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use interp_core::pep::{build_gd_pep, GdVariant};

    #[test]
    fn header_and_row_count() {
        let inst = build_gd_pep(1, 1.0, 1.0, 1.0, GdVariant::Tight);
        let mut buf = Vec::new();
        write_instance(&inst, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("%%sdp-instance 3 2 7\n"));
        assert_eq!(text.lines().filter(|l| l.starts_with("con ")).count(), 7);
        assert!(text.contains("obj F 2 1e0"));
    }
}
