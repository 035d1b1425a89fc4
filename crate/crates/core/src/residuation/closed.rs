use std::fmt;
use std::str::FromStr;

use crate::algebra::{Aggregator, Kernel};

/// Rows of the printed residual table, plus the piecewise kernel used by
/// the classifier.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Table1Row {
    /// `min(u^p, v^p)`: `1` if `u^p ≤ v`, else `v^(1/p)`.
    MinPow {
        p: f64,
    },
    /// Gated min: `1` if `u ≤ v`, else `max(a − u, v)`.
    GatedMin {
        a: f64,
    },
    /// Gated product: `1` if `u ≤ v`, else `max(1 − u, v/u)`.
    GatedProd,
    /// Harmonic mean. The printed form `max(0, uv/(2u − v))` misses both
    /// the `2u ≤ v` case and the cap at 1.
    Harmonic,
    Lukasiewicz,
    Hamacher,
    Product,
    /// Arithmetic mean. The printed `2v − u` can go negative.
    ArithMean,
    Min,
    /// The piecewise kernel on `(0.5, 1]²`.
    So4,
}

impl Table1Row {
    pub const ALL_DEFAULT: [Table1Row; 10] = [
        Table1Row::MinPow { p: 2.0 },
        Table1Row::GatedMin { a: 0.5 },
        Table1Row::GatedProd,
        Table1Row::Harmonic,
        Table1Row::Lukasiewicz,
        Table1Row::Hamacher,
        Table1Row::Product,
        Table1Row::ArithMean,
        Table1Row::Min,
        Table1Row::So4,
    ];

    /// Row label: `1`..`9` or `so4`.
    pub fn label(&self) -> &'static str {
        match self {
            Table1Row::MinPow { .. } => "1",
            Table1Row::GatedMin { .. } => "2",
            Table1Row::GatedProd => "3",
            Table1Row::Harmonic => "4",
            Table1Row::Lukasiewicz => "5",
            Table1Row::Hamacher => "6",
            Table1Row::Product => "7",
            Table1Row::ArithMean => "8",
            Table1Row::Min => "9",
            Table1Row::So4 => "so4",
        }
    }

    /// The catalog aggregator whose residual this row describes.
    pub fn source(&self) -> Aggregator {
        let kernel = match *self {
            Table1Row::MinPow { p } => Kernel::MinPow { p },
            Table1Row::GatedMin { a } => Kernel::GatedMin { a },
            Table1Row::GatedProd => Kernel::GatedProd,
            Table1Row::Harmonic => Kernel::Harmonic,
            Table1Row::Lukasiewicz => Kernel::Lukasiewicz,
            Table1Row::Hamacher => Kernel::Hamacher,
            Table1Row::Product => Kernel::Product,
            Table1Row::ArithMean => Kernel::ArithMean,
            Table1Row::Min => Kernel::Min,
            Table1Row::So4 => Kernel::So4,
        };
        let id = match kernel {
            Kernel::MinPow { .. } => "t1_min_pow",
            Kernel::GatedMin { .. } => "t1_gated_min",
            Kernel::GatedProd => "t1_gated_prod",
            Kernel::Harmonic => "t1_harmonic",
            Kernel::Lukasiewicz => "t1_lukasiewicz",
            Kernel::Hamacher => "t1_hamacher",
            Kernel::Product => "t1_product",
            Kernel::ArithMean => "t1_arith_mean",
            Kernel::Min => "t1_min",
            _ => "so4_piecewise",
        };
        Aggregator::from_kernel(id, kernel)
    }

    /// The row whose closed form is trusted for `f`, if any. Rows with a
    /// known misprint (harmonic, arithmetic mean) are never attached.
    pub fn for_aggregator(f: &Aggregator) -> Option<Table1Row> {
        match f.kernel()? {
            Kernel::MinPow { p } => Some(Table1Row::MinPow { p }),
            Kernel::SqrtMin => Some(Table1Row::MinPow { p: 0.5 }),
            Kernel::SqMin => Some(Table1Row::MinPow { p: 2.0 }),
            Kernel::GatedMin { a } => Some(Table1Row::GatedMin { a }),
            Kernel::GatedProd => Some(Table1Row::GatedProd),
            Kernel::Lukasiewicz => Some(Table1Row::Lukasiewicz),
            Kernel::Hamacher => Some(Table1Row::Hamacher),
            Kernel::Product => Some(Table1Row::Product),
            Kernel::Min => Some(Table1Row::Min),
            Kernel::So4 => Some(Table1Row::So4),
            _ => None,
        }
    }

    /// The formula exactly as printed, without clamping.
    pub fn residual_printed(&self, u: f64, v: f64) -> f64 {
        match *self {
            Table1Row::MinPow { p } => {
                if u.powf(p) <= v {
                    1.0
                } else {
                    v.powf(1.0 / p)
                }
            }
            Table1Row::GatedMin { a } => {
                if u <= v {
                    1.0
                } else {
                    (a - u).max(v)
                }
            }
            Table1Row::GatedProd => {
                if u <= v {
                    1.0
                } else {
                    (1.0 - u).max(v / u)
                }
            }
            Table1Row::Harmonic => {
                if u == 0.0 {
                    1.0
                } else {
                    (u * v / (2.0 * u - v)).max(0.0)
                }
            }
            Table1Row::Lukasiewicz => {
                if u <= v {
                    1.0
                } else {
                    v - u + 1.0
                }
            }
            Table1Row::Hamacher => {
                if u <= v {
                    1.0
                } else {
                    (u * v + 1.0 - u) / (u * v + 1.0 - v)
                }
            }
            Table1Row::Product => {
                if u <= v {
                    1.0
                } else {
                    v / u
                }
            }
            Table1Row::ArithMean => {
                if u <= 2.0 * v - 1.0 {
                    1.0
                } else {
                    2.0 * v - u
                }
            }
            Table1Row::Min => {
                if u <= v {
                    1.0
                } else {
                    v
                }
            }
            Table1Row::So4 => {
                if u > 0.5 && v >= 0.5 {
                    let a = 2.0 * u - 1.0;
                    let first = (2.0 * v - 1.0).sqrt() / (2.0 * a.sqrt());
                    let second = v / (2.0 * a * a);
                    (first.max(second) + 0.5).min(1.0)
                } else if v < 0.5 && u > v {
                    v
                } else {
                    1.0
                }
            }
        }
    }

    /// The closed form used for computation: the printed formula clamped
    /// into `[0, 1]`, except for the piecewise kernel whose printed residual
    /// is replaced by the derived one.
    pub fn residual_closed(&self, u: f64, v: f64) -> f64 {
        match *self {
            Table1Row::So4 => so4_residual(u, v),
            _ => self.residual_printed(u, v).clamp(0.0, 1.0),
        }
    }
}

/// Residual of the piecewise kernel. With `a = 2u − 1`, `c = 2v − 1` the
/// kernel is `(1 + min(a,b) max(a²,b²)) / 2`, so solving for `b` gives
/// `c/a²` when `c ≤ a³` and `√(c/a)` otherwise.
#[inline]
fn so4_residual(u: f64, v: f64) -> f64 {
    if u <= v {
        1.0
    } else if u > 0.5 && v >= 0.5 {
        let a = 2.0 * u - 1.0;
        let c = 2.0 * v - 1.0;
        let b = (c / a).sqrt().min(c / (a * a));
        (0.5 + b / 2.0).min(1.0)
    } else {
        v
    }
}

impl fmt::Display for Table1Row {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Table1Row::MinPow { p } => write!(f, "row 1 (p={p})"),
            Table1Row::GatedMin { a } => write!(f, "row 2 (a={a})"),
            Table1Row::So4 => f.write_str("so4"),
            other => write!(f, "row {}", other.label()),
        }
    }
}

impl FromStr for Table1Row {
    type Err = String;

    /// Accepts `1`..`9`, `so1`..`so4`; rows 1 and 2 take default parameters.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let row = match s.trim().to_ascii_lowercase().as_str() {
            "1" => Table1Row::MinPow { p: 2.0 },
            "2" => Table1Row::GatedMin { a: 0.5 },
            "3" | "so1" => Table1Row::GatedProd,
            "4" => Table1Row::Harmonic,
            "5" => Table1Row::Lukasiewicz,
            "6" | "so2" => Table1Row::Hamacher,
            "7" => Table1Row::Product,
            "8" => Table1Row::ArithMean,
            "9" | "so3" => Table1Row::Min,
            "so4" => Table1Row::So4,
            other => return Err(format!("unknown residual row `{other}`")),
        };
        Ok(row)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn printed_examples() {
        assert_eq!(Table1Row::Min.residual_closed(0.4, 0.2), 0.2);
        assert!((Table1Row::Lukasiewicz.residual_closed(0.9, 0.4) - 0.5).abs() < 1e-15);
        assert_eq!(
            Table1Row::GatedMin { a: 0.5 }.residual_closed(0.6, 0.3),
            0.3
        );
    }

    #[test]
    fn printed_rows_leave_the_unit_interval() {
        assert_eq!(Table1Row::ArithMean.residual_printed(1.0, 0.0), -1.0);
        assert!(Table1Row::Harmonic.residual_printed(0.9, 1.0) > 1.0);
        assert_eq!(Table1Row::ArithMean.residual_closed(1.0, 0.0), 0.0);
    }

    #[test]
    fn so4_residual_inverts_the_kernel() {
        let f = Table1Row::So4.source();
        for &(u, w) in &[(0.9, 0.7), (0.6, 0.95), (0.75, 0.75), (0.99, 0.51)] {
            let v = f.eval(u, w);
            assert!((so4_residual(u, v) - w).abs() < 1e-12, "({u}, {w})");
        }
        // The printed residual misses this by a wide margin.
        assert!((Table1Row::So4.residual_printed(0.9, f.eval(0.9, 0.7)) - 0.7).abs() > 0.1);
    }

    #[test]
    fn rows_parse() {
        assert_eq!("so2".parse::<Table1Row>().unwrap(), Table1Row::Hamacher);
        assert_eq!("9".parse::<Table1Row>().unwrap(), Table1Row::Min);
        assert!("10".parse::<Table1Row>().is_err());
    }
}
