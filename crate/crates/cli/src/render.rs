//! Text renderings of reports. Exact integers are always printed in full.

use std::fmt::Write;

use necklace_core::verify::{BridgeReport, NumericReport, PrimePower, SymbolicReport};
use necklace_core::NecklaceTable;
use num_complex::Complex64;

fn verdict(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

fn regime(a: u64, pp: Option<PrimePower>) -> String {
    match pp {
        Some(PrimePower { p, k }) => format!("a = {a} = {p}^{k} (prime power; N(a,n) counts irreducibles over F_{a})"),
        None => format!("a = {a} (not a prime power)"),
    }
}

fn complex(z: Complex64) -> String {
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{} {sign} {}i", z.re, z.im.abs())
}

pub fn necklace_table(table: &NecklaceTable) -> String {
    let width = table.degree_bound().to_string().len().max(1);
    let mut out = String::new();
    for (i, v) in table.values().iter().enumerate() {
        let _ = writeln!(out, "{:>width$}  {v}", i + 1);
    }
    out.pop();
    out
}

pub fn symbolic(r: &SymbolicReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "identity     prod_(n<=D) (1 - z^n)^N(a,n) = 1 - {}z  mod z^{}", r.base, r.degree_bound + 1);
    let _ = writeln!(out, "base         {}", regime(r.base, r.prime_power));
    let _ = writeln!(out, "degree       {}", r.degree_bound);
    match &r.first_failure {
        None => {
            let _ = writeln!(out, "coefficients 1, -{}, then {} zeros", r.base, r.degree_bound.saturating_sub(1));
        }
        Some(m) => {
            let _ = writeln!(
                out,
                "mismatch     at z^{}: expected {}, got {}",
                m.index, m.expected, m.actual
            );
        }
    }
    match r.cross_check {
        Some(true) => out.push_str("cross-check  direct product agrees\n"),
        Some(false) => out.push_str("cross-check  direct product DISAGREES\n"),
        None => {}
    }
    let _ = write!(out, "result       {}", verdict(r.pass));
    out
}

pub fn numeric(r: &NumericReport) -> String {
    let rows = [
        ("base", regime(r.base, r.prime_power)),
        ("z", complex(r.z)),
        ("|z|", r.z.norm().to_string()),
        ("degree", r.degree_bound.to_string()),
        ("series", complex(r.series_value)),
        ("product", complex(r.product_value)),
        ("target", complex(r.target)),
        ("residual", format!("{:e}", r.residual)),
        ("tail bound", format!("{:e}", r.tail_bound)),
        ("float slack", format!("{:e}", r.float_slack)),
        ("result", verdict(r.pass).to_string()),
    ];
    rows.iter()
        .map(|(k, v)| format!("{k:<12} {v}"))
        .collect::<Vec<_>>()
        .join("\n")
}

pub fn bridge(r: &BridgeReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "field F_{} = F_{}^{}, test {}", r.q, r.p, r.k, r.test);
    let w1 = r.rows.iter().map(|x| x.enumerated.to_string().len()).max().unwrap_or(0).max(10);
    let w2 = r.rows.iter().map(|x| x.formula.to_string().len()).max().unwrap_or(0).max(7);
    let _ = writeln!(out, "{:>3}  {:>w1$}  {:>w2$}  equal", "n", "enumerated", "N(q,n)");
    for row in &r.rows {
        let _ = writeln!(
            out,
            "{:>3}  {:>w1$}  {:>w2$}  {}",
            row.n,
            row.enumerated,
            row.formula.to_string(),
            if row.equal { "yes" } else { "NO" }
        );
    }
    let _ = write!(out, "result {}", verdict(r.pass));
    out
}
