use std::fmt::Write;

use super::RTable;

/// Canonical text form. `parse_rmt(emit_rmt(t))` is structurally equal to `t`.
pub fn emit_rmt(t: &RTable) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "rmt m={} kind={} variant={}", t.m, t.kind, t.variant);
    for g in &t.groups {
        s.push('\n');
        if let Some(label) = &g.label {
            let _ = writeln!(s, "# {label}");
        }
        let _ = writeln!(s, "group {}", g.prefactor);
        for e in &g.entries {
            s.push_str("  term");
            if e.bold {
                s.push_str(" bold");
            }
            if !e.monomial.is_one() {
                let _ = write!(s, " * {}", e.monomial);
            }
            let [i, k, j, l] = e.quad;
            let _ = writeln!(s, " e {i} {k} {j} {l}");
        }
    }
    s
}
