//! Curve parsing: named builtins or comma-separated long Weierstrass
//! coefficients.

use ellstat_core::Curve;
use num_bigint::BigInt;

use crate::CliError;

/// "a1,a2,a3,a4,a6" with arbitrary-precision integer fields, or one of the
/// builtins: "A" = y^2 = x^3 - x, "E" = y^2 = x^3 + 6x - 2,
/// "F" = y^2 + y = x^3 - x.
pub fn parse_curve(spec: &str) -> Result<Curve, CliError> {
    let coeffs: [i64; 5] = match spec {
        "A" => [0, 0, 0, -1, 0],
        "E" => [0, 0, 0, 6, -2],
        "F" => [0, 0, 1, -1, 0],
        _ => {
            return parse_coeff_list(spec);
        }
    };
    Curve::from_i64(coeffs).map_err(|e| CliError::Usage(e.to_string()))
}

fn parse_coeff_list(spec: &str) -> Result<Curve, CliError> {
    let parts: Vec<&str> = spec.split(',').map(str::trim).collect();
    if parts.len() != 5 {
        return Err(CliError::Usage(format!(
            "curve spec needs 5 comma-separated integers (a1,a2,a3,a4,a6), got {} field(s) in {spec:?}",
            parts.len()
        )));
    }
    let mut vals = Vec::with_capacity(5);
    for (i, part) in parts.iter().enumerate() {
        let v: BigInt = part.parse().map_err(|_| {
            CliError::Usage(format!("coefficient {} ({part:?}) is not an integer", i + 1))
        })?;
        vals.push(v);
    }
    Curve::new(
        vals[0].clone(),
        vals[1].clone(),
        vals[2].clone(),
        vals[3].clone(),
        vals[4].clone(),
    )
    .map_err(|_| CliError::Usage(format!("curve {spec:?} is singular (discriminant zero)")))
}
