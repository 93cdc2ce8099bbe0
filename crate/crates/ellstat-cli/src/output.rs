//! CSV rendering: integer-exact ratio formatting and the self-describing
//! header every table carries.

/// num/den to 5 decimal places, half-even, computed in integers so output
/// is bit-identical across platforms.
pub fn format_ratio(num: u64, den: u64) -> String {
    assert!(den > 0);
    let scaled = num as u128 * 100_000;
    let mut q = scaled / den as u128;
    let rem = scaled % den as u128;
    let twice = 2 * rem;
    if twice > den as u128 || (twice == den as u128 && q % 2 == 1) {
        q += 1;
    }
    format!("{}.{:05}", q / 100_000, q % 100_000)
}

/// f64 to 5 decimals (used for transcendental ratios like li2 comparisons).
pub fn format_f64_5(v: f64) -> String {
    format!("{v:.5}")
}

/// li2(x) = integral from 2 to x of dt / ln(t)^2, by composite Simpson.
pub fn li2(x: f64) -> f64 {
    if x <= 2.0 {
        return 0.0;
    }
    let n = 1 << 14; // even interval count, deterministic
    let h = (x - 2.0) / n as f64;
    let f = |t: f64| 1.0 / (t.ln() * t.ln());
    let mut sum = f(2.0) + f(x);
    for i in 1..n {
        let t = 2.0 + i as f64 * h;
        sum += f(t) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    sum * h / 3.0
}

/// The `#` header prefix: artifact version and the result-defining config.
/// Thread count and file paths are deliberately omitted so output is
/// byte-identical across worker counts.
pub fn header(subcommand: &str, config_fields: &[(&str, String)]) -> String {
    let mut s = format!("# ellstat {}\n# subcommand={subcommand}", env!("CARGO_PKG_VERSION"));
    for (k, v) in config_fields {
        s.push_str(&format!(" {k}={v}"));
    }
    s.push('\n');
    s
}
