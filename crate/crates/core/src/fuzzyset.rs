//! Finite fuzzy sets, membership curves on the real line and the
//! mean-absolute-difference similarity measure.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FuzzySetError {
    #[error("a fuzzy set needs at least one element")]
    Empty,
    #[error("{labels} labels but {degrees} degrees")]
    LengthMismatch { labels: usize, degrees: usize },
    #[error("duplicate universe label `{0}`")]
    DuplicateLabel(String),
    #[error("degree {value} of `{label}` is outside [0, 1]")]
    OutOfUnit { label: String, value: f64 },
    #[error("fuzzy sets live on different universes")]
    UniverseMismatch,
    #[error("bad membership function `{0}`")]
    BadMembership(String),
    #[error("empty region: [{lo}, {hi}] with step {step}")]
    BadRegion { lo: f64, hi: f64, step: f64 },
}

/// A fuzzy subset of a finite, ordered universe of opaque labels.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteFuzzySet {
    universe: Vec<String>,
    degrees: Vec<f64>,
}

impl DiscreteFuzzySet {
    pub fn new(universe: Vec<String>, degrees: Vec<f64>) -> Result<Self, FuzzySetError> {
        if universe.is_empty() {
            return Err(FuzzySetError::Empty);
        }
        if universe.len() != degrees.len() {
            return Err(FuzzySetError::LengthMismatch {
                labels: universe.len(),
                degrees: degrees.len(),
            });
        }
        let mut seen = HashSet::new();
        for label in &universe {
            if !seen.insert(label.as_str()) {
                return Err(FuzzySetError::DuplicateLabel(label.clone()));
            }
        }
        for (label, &value) in universe.iter().zip(&degrees) {
            if !(0.0..=1.0).contains(&value) {
                return Err(FuzzySetError::OutOfUnit {
                    label: label.clone(),
                    value,
                });
            }
        }
        Ok(DiscreteFuzzySet { universe, degrees })
    }

    /// Degrees on the default universe `prefix1, prefix2, ...`.
    pub fn on(prefix: &str, degrees: &[f64]) -> Result<Self, FuzzySetError> {
        let universe = (1..=degrees.len())
            .map(|i| format!("{prefix}{i}"))
            .collect();
        Self::new(universe, degrees.to_vec())
    }

    pub fn universe(&self) -> &[String] {
        &self.universe
    }

    pub fn degrees(&self) -> &[f64] {
        &self.degrees
    }

    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degrees.is_empty()
    }

    pub fn same_universe(&self, other: &DiscreteFuzzySet) -> bool {
        self.universe == other.universe
    }

    /// Attains degree 1 somewhere.
    pub fn is_normal(&self) -> bool {
        self.degrees.contains(&1.0)
    }

    pub fn is_crisp(&self) -> bool {
        self.degrees.iter().all(|&d| d == 0.0 || d == 1.0)
    }

    pub fn complement(&self) -> DiscreteFuzzySet {
        DiscreteFuzzySet {
            universe: self.universe.clone(),
            degrees: self.degrees.iter().map(|d| 1.0 - d).collect(),
        }
    }

    /// Pointwise `≤`; false on different universes.
    pub fn is_subset_of(&self, other: &DiscreteFuzzySet) -> bool {
        self.same_universe(other) && self.degrees.iter().zip(&other.degrees).all(|(a, b)| a <= b)
    }

    /// Same universe with new degrees.
    pub fn with_degrees(&self, degrees: Vec<f64>) -> Result<DiscreteFuzzySet, FuzzySetError> {
        Self::new(self.universe.clone(), degrees)
    }
}

impl fmt::Display for DiscreteFuzzySet {
    /// Degrees to four decimals, space separated.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.degrees.iter().map(|d| format!("{d:.4}")).collect();
        f.write_str(&parts.join(" "))
    }
}

/// Width added outside and removed inside the crisp bounds of a rule when
/// building its trapezoid: `(a − 0.25, a + 0.1, b − 0.1, b + 0.25)`.
pub const TRAPEZOID_OUTER: f64 = 0.25;
pub const TRAPEZOID_INNER: f64 = 0.1;

/// Parametric membership curves on the real line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MembershipFn {
    /// Zero outside `[k1, k4]`, one on `[k2, k3]`, linear in between.
    Trapezoid([f64; 4]),
    /// One at `c`, zero outside `[c − h, c + h]`, linear in between.
    Triangle { c: f64, h: f64 },
    /// The constant degree of a one-point consequent.
    Point(f64),
}

impl MembershipFn {
    pub fn trapezoid(k1: f64, k2: f64, k3: f64, k4: f64) -> Result<Self, FuzzySetError> {
        let knots = [k1, k2, k3, k4];
        if knots.iter().any(|k| !k.is_finite()) || !(k1 <= k2 && k2 <= k3 && k3 <= k4) {
            return Err(FuzzySetError::BadMembership(format!(
                "tra({k1},{k2},{k3},{k4})"
            )));
        }
        Ok(MembershipFn::Trapezoid(knots))
    }

    pub fn triangle(c: f64, h: f64) -> Result<Self, FuzzySetError> {
        if !(c.is_finite() && h > 0.0 && h.is_finite()) {
            return Err(FuzzySetError::BadMembership(format!("tri({c},{h})")));
        }
        Ok(MembershipFn::Triangle { c, h })
    }

    pub fn point(a: f64) -> Result<Self, FuzzySetError> {
        if !(0.0..=1.0).contains(&a) {
            return Err(FuzzySetError::BadMembership(format!("point({a})")));
        }
        Ok(MembershipFn::Point(a))
    }

    /// Trapezoid for the crisp condition `a ≤ x ≤ b`.
    pub fn from_bounds(a: f64, b: f64) -> Result<Self, FuzzySetError> {
        Self::trapezoid(
            a - TRAPEZOID_OUTER,
            a + TRAPEZOID_INNER,
            b - TRAPEZOID_INNER,
            b + TRAPEZOID_OUTER,
        )
    }

    /// Closed interval outside which the degree is zero; the whole line for
    /// a point consequent.
    pub fn support(&self) -> (f64, f64) {
        match *self {
            MembershipFn::Trapezoid([k1, _, _, k4]) => (k1, k4),
            MembershipFn::Triangle { c, h } => (c - h, c + h),
            MembershipFn::Point(_) => (f64::NEG_INFINITY, f64::INFINITY),
        }
    }

    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        if x.is_nan() {
            return 0.0;
        }
        match *self {
            MembershipFn::Trapezoid([k1, k2, k3, k4]) => {
                if x < k1 || x > k4 {
                    0.0
                } else if x < k2 {
                    (x - k1) / (k2 - k1)
                } else if x <= k3 {
                    1.0
                } else {
                    (k4 - x) / (k4 - k3)
                }
            }
            MembershipFn::Triangle { c, h } => (1.0 - (x - c).abs() / h).max(0.0),
            MembershipFn::Point(a) => a,
        }
    }
}

/// Alias matching the operation name used throughout the docs.
pub fn eval_membership(m: &MembershipFn, x: f64) -> f64 {
    m.eval(x)
}

impl fmt::Display for MembershipFn {
    /// `tra(k1,k2,k3,k4)`, `tri(c,h)` or `point(a)`, with shortest
    /// round-tripping float formatting.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MembershipFn::Trapezoid([a, b, c, d]) => write!(f, "tra({a:?},{b:?},{c:?},{d:?})"),
            MembershipFn::Triangle { c, h } => write!(f, "tri({c:?},{h:?})"),
            MembershipFn::Point(a) => write!(f, "point({a:?})"),
        }
    }
}

impl FromStr for MembershipFn {
    type Err = FuzzySetError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || FuzzySetError::BadMembership(s.to_string());
        let s = s.trim();
        let open = s.find('(').ok_or_else(bad)?;
        let inner = s[open + 1..].strip_suffix(')').ok_or_else(bad)?;
        let args = inner
            .split(',')
            .map(|t| t.trim().parse::<f64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| bad())?;
        match (s[..open].trim(), args.as_slice()) {
            ("tra", &[a, b, c, d]) => Self::trapezoid(a, b, c, d),
            ("tri", &[c, h]) => Self::triangle(c, h),
            ("point", &[a]) => Self::point(a),
            _ => Err(bad()),
        }
    }
}

/// Pointwise minimum of two one-dimensional curves, a membership function
/// on the plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinProduct {
    pub first: MembershipFn,
    pub second: MembershipFn,
}

impl MinProduct {
    #[inline]
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        self.first.eval(x).min(self.second.eval(y))
    }

    /// The Cartesian product of the two supports.
    pub fn support(&self) -> ((f64, f64), (f64, f64)) {
        (self.first.support(), self.second.support())
    }
}

pub fn min_product(first: MembershipFn, second: MembershipFn) -> MinProduct {
    MinProduct { first, second }
}

/// `(1/n) Σ (1 − |aᵢ − bᵢ|)`.
pub fn similarity(a: &DiscreteFuzzySet, b: &DiscreteFuzzySet) -> Result<f64, FuzzySetError> {
    if !a.same_universe(b) {
        return Err(FuzzySetError::UniverseMismatch);
    }
    let total: f64 = a
        .degrees
        .iter()
        .zip(&b.degrees)
        .map(|(x, y)| 1.0 - (x - y).abs())
        .sum();
    Ok(total / a.len() as f64)
}

/// Which similarity axiom a check refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SimilarityAxiom {
    /// `S(A,B) = S(B,A)`.
    Symmetry,
    /// `S(A,Aᶜ) = 0 ⇔ A crisp`.
    CrispComplement,
    /// `S(A,B) = 1 ⇔ A = B`.
    Identity,
    /// `A ≤ B ≤ C ≤ D ⇒ S(A,D) ≤ S(B,C)`: outer pairs of a chain are less
    /// similar than inner pairs.
    Chain,
    /// `S(A,B) = S(Aᶜ,Bᶜ)`.
    ComplementInvariance,
}

impl fmt::Display for SimilarityAxiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            SimilarityAxiom::Symmetry => "symmetry",
            SimilarityAxiom::CrispComplement => "crisp_complement",
            SimilarityAxiom::Identity => "identity",
            SimilarityAxiom::Chain => "chain",
            SimilarityAxiom::ComplementInvariance => "complement_invariance",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityCheck {
    pub axiom: SimilarityAxiom,
    pub holds: bool,
    /// Indices into the sample list of the first violation.
    pub witness: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityReport {
    pub checks: Vec<SimilarityCheck>,
    /// First chain `A ≤ B ≤ C ≤ D` with `S(A,B) > S(C,D)`. This literal
    /// ordering is not implied by the other axioms and fails for the
    /// mean-absolute-difference measure, so it is reported but not required.
    pub literal_chain_violation: Option<Vec<usize>>,
}

impl SimilarityReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    pub fn get(&self, axiom: SimilarityAxiom) -> &SimilarityCheck {
        self.checks
            .iter()
            .find(|c| c.axiom == axiom)
            .expect("every axiom is checked")
    }
}

const SIM_EPS: f64 = 1e-12;

/// Checks the similarity axioms over all pairs and ordered chains of
/// `samples`, which must share one universe.
pub fn check_similarity_axioms<S>(
    s: S,
    samples: &[DiscreteFuzzySet],
) -> Result<SimilarityReport, FuzzySetError>
where
    S: Fn(&DiscreteFuzzySet, &DiscreteFuzzySet) -> f64,
{
    if let Some(first) = samples.first() {
        if samples.iter().any(|x| !x.same_universe(first)) {
            return Err(FuzzySetError::UniverseMismatch);
        }
    }
    let n = samples.len();
    let pairs = || (0..n).flat_map(|i| (0..n).map(move |j| (i, j)));
    let check = |axiom, witness: Option<Vec<usize>>| SimilarityCheck {
        axiom,
        holds: witness.is_none(),
        witness,
    };

    let symmetry = pairs()
        .find(|&(i, j)| (s(&samples[i], &samples[j]) - s(&samples[j], &samples[i])).abs() > SIM_EPS)
        .map(|(i, j)| vec![i, j]);
    let crisp = (0..n)
        .find(|&i| {
            let a = &samples[i];
            (s(a, &a.complement()).abs() <= SIM_EPS) != a.is_crisp()
        })
        .map(|i| vec![i]);
    let identity = pairs()
        .find(|&(i, j)| {
            ((s(&samples[i], &samples[j]) - 1.0).abs() <= SIM_EPS) != (samples[i] == samples[j])
        })
        .map(|(i, j)| vec![i, j]);
    let invariance = pairs()
        .find(|&(i, j)| {
            let (a, b) = (&samples[i], &samples[j]);
            (s(a, b) - s(&a.complement(), &b.complement())).abs() > SIM_EPS
        })
        .map(|(i, j)| vec![i, j]);

    let mut chain = None;
    let mut literal = None;
    'outer: for a in 0..n {
        for b in 0..n {
            if !samples[a].is_subset_of(&samples[b]) {
                continue;
            }
            for c in 0..n {
                if !samples[b].is_subset_of(&samples[c]) {
                    continue;
                }
                for d in 0..n {
                    if !samples[c].is_subset_of(&samples[d]) {
                        continue;
                    }
                    let (sa, sb, sc, sd) = (&samples[a], &samples[b], &samples[c], &samples[d]);
                    if chain.is_none() && s(sa, sd) > s(sb, sc) + SIM_EPS {
                        chain = Some(vec![a, b, c, d]);
                    }
                    if literal.is_none() && s(sa, sb) > s(sc, sd) + SIM_EPS {
                        literal = Some(vec![a, b, c, d]);
                    }
                    if chain.is_some() && literal.is_some() {
                        break 'outer;
                    }
                }
            }
        }
    }

    Ok(SimilarityReport {
        checks: vec![
            check(SimilarityAxiom::Symmetry, symmetry),
            check(SimilarityAxiom::CrispComplement, crisp),
            check(SimilarityAxiom::Identity, identity),
            check(SimilarityAxiom::Chain, chain),
            check(SimilarityAxiom::ComplementInvariance, invariance),
        ],
        literal_chain_violation: literal,
    })
}

/// Axis-aligned rectangle sampled on a uniform grid. The number of points
/// per axis is `round((hi − lo) / step) + 1` and points are `lo + k·step`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridRegion2D {
    pub lo: [f64; 2],
    pub hi: [f64; 2],
    pub step: f64,
}

impl GridRegion2D {
    pub const DEFAULT_STEP: f64 = 0.01;

    pub fn new(lo: [f64; 2], hi: [f64; 2], step: f64) -> Result<Self, FuzzySetError> {
        for axis in 0..2 {
            if !(lo[axis] < hi[axis] && step > 0.0 && step.is_finite()) {
                return Err(FuzzySetError::BadRegion {
                    lo: lo[axis],
                    hi: hi[axis],
                    step,
                });
            }
        }
        Ok(GridRegion2D { lo, hi, step })
    }

    /// Square of half-width `h` around `centre`.
    pub fn around(centre: [f64; 2], h: f64, step: f64) -> Result<Self, FuzzySetError> {
        Self::new(
            [centre[0] - h, centre[1] - h],
            [centre[0] + h, centre[1] + h],
            step,
        )
    }

    pub fn count(&self, axis: usize) -> usize {
        ((self.hi[axis] - self.lo[axis]) / self.step).round() as usize + 1
    }

    pub fn coords(&self, axis: usize) -> Vec<f64> {
        (0..self.count(axis))
            .map(|k| self.lo[axis] + k as f64 * self.step)
            .collect()
    }
}
