use std::fmt;
use std::sync::{Arc, OnceLock};

use super::axioms::{compute_props, PropSet};
use super::{AlgebraError, UnitValue};

/// Boundary conditions of the gated kernels (`u + v ≤ a`) are tested with
/// this slack so that grid points lying on the boundary in exact
/// arithmetic take the closed (lower) branch.
pub(crate) const BRANCH_EPS: f64 = 1e-12;

pub type Map = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;
type JumpMap = Arc<dyn Fn(f64) -> Vec<f64> + Send + Sync>;

/// The closed-form functions of the catalog.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Kernel {
    /// `min(u^p, v^p)`
    MinPow {
        p: f64,
    },
    /// `0` if `u + v ≤ a`, else `min(u, v)`
    GatedMin {
        a: f64,
    },
    /// `0` if `u + v ≤ 1`, else `uv`
    GatedProd,
    /// `2uv / (u + v)`
    Harmonic,
    /// `max(0, u + v − 1)`
    Lukasiewicz,
    /// `max(0, (u + v − 1) / (u + v − uv))`
    Hamacher,
    Product,
    /// `(u + v) / 2`; listed in the catalog although it violates S2.
    ArithMean,
    Min,
    /// `min(u, v) · max(u², v²)`
    MinMaxSq,
    /// `u^p v^p`
    PowProd {
        p: f64,
    },
    /// Rescaled `MinMaxSq` on `(0.5, 1]²`, `min` elsewhere.
    So4,
    /// `min(√u, √v)`
    SqrtMin,
    /// `min(u², v²)`
    SqMin,
    /// `uv(u + v) / 2`
    ProdMean,
}

#[inline]
fn sorted(u: f64, v: f64) -> (f64, f64) {
    if u <= v {
        (u, v)
    } else {
        (v, u)
    }
}

#[inline]
fn power_budget(p: f64, step: f64) -> f64 {
    if p >= 1.0 {
        p * step
    } else {
        step.powf(p)
    }
}

impl Kernel {
    #[inline]
    pub fn eval(&self, u: f64, v: f64) -> f64 {
        match *self {
            Kernel::MinPow { p } => u.min(v).powf(p),
            Kernel::GatedMin { a } => {
                if u + v <= a + BRANCH_EPS {
                    0.0
                } else {
                    u.min(v)
                }
            }
            Kernel::GatedProd => {
                if u + v <= 1.0 + BRANCH_EPS {
                    0.0
                } else {
                    u * v
                }
            }
            Kernel::Harmonic => {
                let s = u + v;
                if s == 0.0 {
                    0.0
                } else {
                    2.0 * u * v / s
                }
            }
            // Written over the sorted pair so that f(u, 1) = u holds bit-exactly.
            Kernel::Lukasiewicz => {
                let (x, y) = sorted(u, v);
                (x - (1.0 - y)).max(0.0)
            }
            Kernel::Hamacher => {
                let (x, y) = sorted(u, v);
                let num = x - (1.0 - y);
                if num <= 0.0 {
                    0.0
                } else {
                    num / (y + x * (1.0 - y))
                }
            }
            Kernel::Product => u * v,
            Kernel::ArithMean => (u + v) / 2.0,
            Kernel::Min => u.min(v),
            Kernel::MinMaxSq => {
                let (x, y) = sorted(u, v);
                x * (y * y)
            }
            Kernel::PowProd { p } => (u * v).powf(p),
            Kernel::So4 => {
                if u > 0.5 && v > 0.5 {
                    let (x, y) = sorted(u, v);
                    let a = 2.0 * x - 1.0;
                    let b = 2.0 * y - 1.0;
                    (1.0 + a * (b * b)) / 2.0
                } else {
                    u.min(v)
                }
            }
            Kernel::SqrtMin => u.min(v).sqrt(),
            Kernel::SqMin => {
                let m = u.min(v);
                m * m
            }
            Kernel::ProdMean => u * v * (u + v) / 2.0,
        }
    }

    /// Upper bound on `f(u, v + h) − f(u, v)` away from registered jumps.
    pub fn continuity_budget(&self, h: f64) -> f64 {
        match *self {
            Kernel::MinPow { p } | Kernel::PowProd { p } => power_budget(p, h),
            Kernel::GatedMin { .. }
            | Kernel::GatedProd
            | Kernel::Lukasiewicz
            | Kernel::Product
            | Kernel::Min => h,
            Kernel::Harmonic | Kernel::Hamacher | Kernel::So4 | Kernel::SqMin => 2.0 * h,
            Kernel::ArithMean => 0.5 * h,
            Kernel::MinMaxSq => 3.0 * h,
            Kernel::SqrtMin => h.sqrt(),
            Kernel::ProdMean => 1.5 * h,
        }
    }

    /// Points `v` at which `f(u, ·)` jumps upward just after `v`.
    pub fn jumps(&self, u: f64) -> Vec<f64> {
        let at = |v0: f64| {
            if u > 0.0 && (0.0..1.0).contains(&v0) {
                vec![v0]
            } else {
                Vec::new()
            }
        };
        match *self {
            Kernel::GatedMin { a } => at(a - u),
            Kernel::GatedProd => at(1.0 - u),
            _ => Vec::new(),
        }
    }
}

#[derive(Clone)]
pub(crate) enum Form {
    Kernel(Kernel),
    Weighted {
        parts: Vec<(f64, Aggregator)>,
        total: f64,
    },
    Ratio {
        f: Map,
        g: Map,
        lipschitz: f64,
    },
    Custom {
        f: Map,
        lipschitz: f64,
        jumps: Option<JumpMap>,
    },
}

struct Inner {
    id: String,
    params: Vec<(String, f64)>,
    form: Form,
    props: OnceLock<PropSet>,
}

/// An evaluable function `[0,1]² → [0,1]`.
///
/// Cheap to clone; the property cache is shared between clones.
#[derive(Clone)]
pub struct Aggregator {
    inner: Arc<Inner>,
}

impl fmt::Debug for Aggregator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Aggregator")
            .field("id", &self.inner.id)
            .field("params", &self.inner.params)
            .finish()
    }
}

impl Aggregator {
    pub(crate) fn from_form(id: impl Into<String>, params: Vec<(String, f64)>, form: Form) -> Self {
        Aggregator {
            inner: Arc::new(Inner {
                id: id.into(),
                params,
                form,
                props: OnceLock::new(),
            }),
        }
    }

    pub fn from_kernel(id: impl Into<String>, kernel: Kernel) -> Self {
        let params = match kernel {
            Kernel::MinPow { p } | Kernel::PowProd { p } => vec![("p".to_string(), p)],
            Kernel::GatedMin { a } => vec![("a".to_string(), a)],
            _ => Vec::new(),
        };
        Self::from_form(id, params, Form::Kernel(kernel))
    }

    /// Wraps an arbitrary map. `lipschitz` bounds its slope in the second
    /// argument; the map has no registered jumps.
    pub fn custom(
        id: impl Into<String>,
        f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
        lipschitz: f64,
    ) -> Self {
        Self::from_form(
            id,
            Vec::new(),
            Form::Custom {
                f: Arc::new(f),
                lipschitz,
                jumps: None,
            },
        )
    }

    /// Like [`Aggregator::custom`] with a registered jump set for `f(u, ·)`.
    pub fn custom_with_jumps(
        id: impl Into<String>,
        f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
        lipschitz: f64,
        jumps: impl Fn(f64) -> Vec<f64> + Send + Sync + 'static,
    ) -> Self {
        Self::from_form(
            id,
            Vec::new(),
            Form::Custom {
                f: Arc::new(f),
                lipschitz,
                jumps: Some(Arc::new(jumps)),
            },
        )
    }

    pub fn id(&self) -> &str {
        &self.inner.id
    }

    pub fn params(&self) -> &[(String, f64)] {
        &self.inner.params
    }

    pub fn param(&self, name: &str) -> Option<f64> {
        self.inner
            .params
            .iter()
            .find(|(n, _)| n == name)
            .map(|&(_, v)| v)
    }

    pub fn kernel(&self) -> Option<Kernel> {
        match self.inner.form {
            Form::Kernel(k) => Some(k),
            _ => None,
        }
    }

    #[inline]
    pub fn eval(&self, u: f64, v: f64) -> f64 {
        match &self.inner.form {
            Form::Kernel(k) => k.eval(u, v),
            Form::Weighted { parts, total } => {
                let mut acc = 0.0;
                for (w, f) in parts {
                    acc += w * f.eval(u, v);
                }
                // Dividing by the float sum of the weights keeps f(1,1) = 1 exact.
                acc / total
            }
            Form::Ratio { f, g, .. } => {
                let a = f(u, v);
                a / (a + g(u, v))
            }
            Form::Custom { f, .. } => f(u, v),
        }
    }

    pub fn apply(&self, u: UnitValue, v: UnitValue) -> UnitValue {
        UnitValue::saturating(self.eval(u.get(), v.get()))
    }

    pub fn continuity_budget(&self, h: f64) -> f64 {
        match &self.inner.form {
            Form::Kernel(k) => k.continuity_budget(h),
            Form::Weighted { parts, total } => {
                parts
                    .iter()
                    .map(|(w, f)| w * f.continuity_budget(h))
                    .sum::<f64>()
                    / total
            }
            Form::Ratio { lipschitz, .. } | Form::Custom { lipschitz, .. } => lipschitz * h,
        }
    }

    pub fn jumps(&self, u: f64) -> Vec<f64> {
        match &self.inner.form {
            Form::Kernel(k) => k.jumps(u),
            Form::Weighted { parts, .. } => {
                let mut all: Vec<f64> = parts
                    .iter()
                    .filter(|(w, _)| *w > 0.0)
                    .flat_map(|(_, f)| f.jumps(u))
                    .collect();
                all.sort_by(f64::total_cmp);
                all.dedup();
                all
            }
            Form::Custom { jumps: Some(j), .. } => j(u),
            _ => Vec::new(),
        }
    }

    /// Properties that pass their grid predicate at the default grids.
    /// Computed on first use.
    pub fn declared_props(&self) -> &PropSet {
        self.inner.props.get_or_init(|| compute_props(self))
    }
}

/// One row of the catalog listing.
#[derive(Debug, Clone, Copy)]
pub struct CatalogEntry {
    pub id: &'static str,
    pub formula: &'static str,
    pub params: &'static str,
}

const ENTRIES: &[CatalogEntry] = &[
    CatalogEntry {
        id: "t1_min_pow",
        formula: "min(u^p, v^p)",
        params: "p>0 (default 2)",
    },
    CatalogEntry {
        id: "t1_gated_min",
        formula: "0 if u+v<=a, else min(u,v)",
        params: "a in [0,1] (default 0.5)",
    },
    CatalogEntry {
        id: "t1_gated_prod",
        formula: "0 if u+v<=1, else uv",
        params: "",
    },
    CatalogEntry {
        id: "t1_harmonic",
        formula: "2uv/(u+v)",
        params: "",
    },
    CatalogEntry {
        id: "t1_lukasiewicz",
        formula: "max(0, u+v-1)",
        params: "",
    },
    CatalogEntry {
        id: "t1_hamacher",
        formula: "max(0, (u+v-1)/(u+v-uv))",
        params: "",
    },
    CatalogEntry {
        id: "t1_product",
        formula: "uv",
        params: "",
    },
    CatalogEntry {
        id: "t1_arith_mean",
        formula: "(u+v)/2",
        params: "",
    },
    CatalogEntry {
        id: "t1_min",
        formula: "min(u,v)",
        params: "",
    },
    CatalogEntry {
        id: "ex33_minmaxsq",
        formula: "min(u,v) max(u^2,v^2)",
        params: "",
    },
    CatalogEntry {
        id: "ex33_powprod",
        formula: "u^p v^p",
        params: "p>0 (default 2)",
    },
    CatalogEntry {
        id: "so4_piecewise",
        formula: "(1+min(2u-1,2v-1) max((2u-1)^2,(2v-1)^2))/2 on (0.5,1]^2, else min(u,v)",
        params: "",
    },
    CatalogEntry {
        id: "o_sqrt_min",
        formula: "min(sqrt u, sqrt v)",
        params: "",
    },
    CatalogEntry {
        id: "o_sq_min",
        formula: "min(u^2, v^2)",
        params: "",
    },
    CatalogEntry {
        id: "o_prod_mean",
        formula: "uv(u+v)/2",
        params: "",
    },
];

/// Aliases used by the classifier tables: `o_a..o_e` and `so1..so4`.
const ALIASES: &[(&str, &str)] = &[
    ("o_a", "t1_min"),
    ("o_b", "t1_product"),
    ("o_c", "o_prod_mean"),
    ("o_d", "o_sqrt_min"),
    ("o_e", "o_sq_min"),
    ("so1", "t1_gated_prod"),
    ("so2", "t1_hamacher"),
    ("so3", "t1_min"),
    ("so4", "so4_piecewise"),
];

pub fn catalog_entries() -> &'static [CatalogEntry] {
    ENTRIES
}

pub(crate) fn resolve_alias(id: &str) -> &str {
    ALIASES
        .iter()
        .find(|(alias, _)| *alias == id)
        .map(|&(_, target)| target)
        .unwrap_or(id)
}

/// Looks up a catalog function by identifier (or alias) and parameters.
///
/// Parameters not given take their defaults: `p = 2`, `a = 0.5`.
pub fn catalog_get(id: &str, params: &[(&str, f64)]) -> Result<Aggregator, AlgebraError> {
    let canonical = resolve_alias(id);
    let allowed: &[&str] = match canonical {
        "t1_min_pow" | "ex33_powprod" => &["p"],
        "t1_gated_min" => &["a"],
        _ => &[],
    };
    if !ENTRIES.iter().any(|e| e.id == canonical) {
        return Err(AlgebraError::UnknownId(id.to_string()));
    }
    for (name, _) in params {
        if !allowed.contains(name) {
            return Err(AlgebraError::UnexpectedParam {
                id: id.to_string(),
                name: name.to_string(),
            });
        }
    }
    let get = |name: &str, default: f64| {
        params
            .iter()
            .find(|(n, _)| *n == name)
            .map(|&(_, v)| v)
            .unwrap_or(default)
    };
    let bad = |name: &str, value: f64, expected: &'static str| AlgebraError::BadParam {
        id: id.to_string(),
        name: name.to_string(),
        value,
        expected,
    };

    let kernel = match canonical {
        "t1_min_pow" | "ex33_powprod" => {
            let p = get("p", 2.0);
            if !(p > 0.0 && p.is_finite()) {
                return Err(bad("p", p, "p > 0"));
            }
            if canonical == "t1_min_pow" {
                Kernel::MinPow { p }
            } else {
                Kernel::PowProd { p }
            }
        }
        "t1_gated_min" => {
            let a = get("a", 0.5);
            if !(0.0..=1.0).contains(&a) {
                return Err(bad("a", a, "a in [0, 1]"));
            }
            Kernel::GatedMin { a }
        }
        "t1_gated_prod" => Kernel::GatedProd,
        "t1_harmonic" => Kernel::Harmonic,
        "t1_lukasiewicz" => Kernel::Lukasiewicz,
        "t1_hamacher" => Kernel::Hamacher,
        "t1_product" => Kernel::Product,
        "t1_arith_mean" => Kernel::ArithMean,
        "t1_min" => Kernel::Min,
        "ex33_minmaxsq" => Kernel::MinMaxSq,
        "so4_piecewise" => Kernel::So4,
        "o_sqrt_min" => Kernel::SqrtMin,
        "o_sq_min" => Kernel::SqMin,
        "o_prod_mean" => Kernel::ProdMean,
        _ => unreachable!("checked against ENTRIES"),
    };
    Ok(Aggregator::from_kernel(canonical, kernel))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn get(id: &str) -> Aggregator {
        catalog_get(id, &[]).unwrap()
    }

    #[test]
    fn direct_substitution() {
        assert_eq!(get("t1_product").eval(0.5, 0.4), 0.2);
        assert_eq!(get("t1_gated_prod").eval(0.4, 0.5), 0.0);
        assert_eq!(get("t1_gated_prod").eval(0.6, 0.5), 0.3);
        assert_eq!(get("t1_arith_mean").eval(0.0, 0.6), 0.3);
        assert_eq!(get("o_prod_mean").eval(0.5, 0.5), 0.125);
        assert_eq!(get("t1_lukasiewicz").eval(0.9, 0.4), 0.30000000000000004);
        assert_eq!(get("so4_piecewise").eval(0.5, 0.9), 0.5);
    }

    #[test]
    fn min_has_neutral_one_on_grid() {
        let f = get("t1_min");
        for k in 0..=1000 {
            let v = k as f64 / 1000.0;
            assert_eq!(f.eval(1.0, v), v);
        }
    }

    #[test]
    fn aliases_resolve() {
        assert_eq!(get("o_a").id(), "t1_min");
        assert_eq!(get("so1").id(), "t1_gated_prod");
        assert_eq!(get("so4").id(), "so4_piecewise");
    }

    #[test]
    fn parameters_default_and_validate() {
        assert_eq!(get("t1_min_pow").param("p"), Some(2.0));
        assert_eq!(get("t1_gated_min").param("a"), Some(0.5));
        assert!(matches!(
            catalog_get("t1_min_pow", &[("p", 0.0)]),
            Err(AlgebraError::BadParam { .. })
        ));
        assert!(matches!(
            catalog_get("t1_gated_min", &[("a", 1.5)]),
            Err(AlgebraError::BadParam { .. })
        ));
        assert!(matches!(
            catalog_get("t1_min", &[("p", 2.0)]),
            Err(AlgebraError::UnexpectedParam { .. })
        ));
        assert_eq!(
            catalog_get("nosuch", &[]).unwrap_err(),
            AlgebraError::UnknownId("nosuch".into())
        );
    }

    #[test]
    fn gated_boundary_takes_closed_branch() {
        let f = get("t1_gated_min");
        assert_eq!(f.eval(0.2, 0.3), 0.0);
        assert_eq!(f.eval(0.1, 0.4), 0.0);
        assert!(f.eval(0.2, 0.301) > 0.0);
        assert_eq!(f.jumps(0.2), vec![0.3]);
        assert!(f.jumps(0.0).is_empty());
    }
}
