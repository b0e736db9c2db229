//! Triangular fuzzy numbers and the machinery to push them through
//! computations: vertex-rule arithmetic, alpha-cuts, extension-principle
//! propagation over interval boxes, and centroid defuzzification.
//!
//! Two evaluation styles coexist on purpose. Vertex rules apply an operation
//! directly to the `(a, b, c)` triples and stay triangular by construction;
//! they are exact for linear operations and a (conservative) approximation
//! for products and quotients. Alpha-cut propagation evaluates the exact
//! extension-principle intervals level by level and is the default for
//! nonlinear formulas. Both agree at the support endpoints and the peak for
//! ratio-shaped formulas; property tests pin down where they diverge.

use serde::{Deserialize, Serialize};
use std::borrow::Cow;
use std::fmt;
use thiserror::Error;

/// Free-form unit tag attached to fuzzy quantities.
///
/// A label, not a dimension system: addition requires equal tags, while
/// multiplication and division combine them textually, applying only the
/// trivial simplifications (dimensionless operands, `x/x`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Unit(Cow<'static, str>);

impl Unit {
    pub const DIMENSIONLESS: Unit = Unit(Cow::Borrowed(""));
    /// Failures per 10^6 device-hours (part-stress handbook scale).
    pub const PER_MILLION_HOURS: Unit = Unit(Cow::Borrowed("/1e6h"));
    /// Failures per year (Markov-layer scale).
    pub const PER_YEAR: Unit = Unit(Cow::Borrowed("/yr"));
    pub const YEARS: Unit = Unit(Cow::Borrowed("yr"));

    pub fn new(tag: impl Into<String>) -> Unit {
        Unit(Cow::Owned(tag.into()))
    }

    pub fn is_dimensionless(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    fn product(&self, other: &Unit) -> Unit {
        if self.is_dimensionless() {
            other.clone()
        } else if other.is_dimensionless() {
            self.clone()
        } else {
            Unit(Cow::Owned(format!("({})*({})", self.0, other.0)))
        }
    }

    fn quotient(&self, other: &Unit) -> Unit {
        if other.is_dimensionless() {
            self.clone()
        } else if self == other {
            Unit::DIMENSIONLESS
        } else {
            Unit(Cow::Owned(format!("({})/({})", self.0, other.0)))
        }
    }
}

impl fmt::Display for Unit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_dimensionless() {
            f.write_str("<dimensionless>")
        } else {
            f.write_str(&self.0)
        }
    }
}

/// Errors from fuzzy-number construction and arithmetic.
#[derive(Debug, Error, PartialEq)]
pub enum FuzzyError {
    #[error("vertices must satisfy a <= b <= c, got ({a}, {b}, {c})")]
    VertexOrder { a: f64, b: f64, c: f64 },
    #[error("vertices must be finite, got ({a}, {b}, {c})")]
    NonFinite { a: f64, b: f64, c: f64 },
    #[error("unit mismatch: {left} vs {right}")]
    UnitMismatch { left: Unit, right: Unit },
    #[error("scale factor must be finite and nonnegative, got {0}")]
    InvalidScale(f64),
    #[error("fuzzy multiplication/division requires nonnegative operands")]
    NegativeOperand,
    #[error("divisor must have strictly positive support")]
    NonPositiveDivisor,
    #[error("alpha must lie in [0, 1], got {0}")]
    AlphaOutOfRange(f64),
    #[error("interval bounds must be finite with lo <= hi, got [{lo}, {hi}]")]
    BadInterval { lo: f64, hi: f64 },
    #[error("alpha grid is empty")]
    EmptyGrid,
    #[error("propagate requires at least one fuzzy input")]
    NoInputs,
    #[error("too many fuzzy inputs for corner search ({0})")]
    TooManyInputs(usize),
    #[error("function evaluation returned a non-finite value at {point:?}")]
    EvalFailed { point: Vec<f64> },
    #[error("membership curve needs at least one point")]
    EmptyCurve,
    #[error("membership curve x values must be strictly increasing")]
    NonIncreasingX,
    #[error("membership values must lie in [0, 1]")]
    MembershipRange,
    #[error("membership curve must reach 1 at its peak")]
    MissingPeak,
    #[error("membership curve must be quasi-concave (one rise, one fall)")]
    NotQuasiConcave,
    #[error("membership curve has zero area")]
    ZeroArea,
}

/// Triangular fuzzy number: membership rises linearly from `a` to 1 at the
/// peak `b`, then falls linearly back to 0 at `c`.
#[derive(Clone, Debug, PartialEq)]
pub struct Tfn {
    a: f64,
    b: f64,
    c: f64,
    unit: Unit,
}

impl Tfn {
    /// Builds a TFN, rejecting non-finite or mis-ordered vertices.
    pub fn new(a: f64, b: f64, c: f64, unit: Unit) -> Result<Tfn, FuzzyError> {
        if !(a.is_finite() && b.is_finite() && c.is_finite()) {
            return Err(FuzzyError::NonFinite { a, b, c });
        }
        if !(a <= b && b <= c) {
            return Err(FuzzyError::VertexOrder { a, b, c });
        }
        Ok(Tfn { a, b, c, unit })
    }

    /// A degenerate TFN with zero spread, treated as crisp everywhere.
    pub fn crisp(value: f64, unit: Unit) -> Result<Tfn, FuzzyError> {
        Tfn::new(value, value, value, unit)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    /// Peak vertex (membership 1).
    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn unit(&self) -> &Unit {
        &self.unit
    }

    pub fn vertices(&self) -> (f64, f64, f64) {
        (self.a, self.b, self.c)
    }

    pub fn is_crisp(&self) -> bool {
        self.a == self.c
    }

    pub fn is_nonnegative(&self) -> bool {
        self.a >= 0.0
    }

    /// Same vertices under a different unit tag. Used at the seams where a
    /// formula is dimensionally informal and the caller owns the bookkeeping.
    pub fn with_unit(&self, unit: Unit) -> Tfn {
        Tfn { a: self.a, b: self.b, c: self.c, unit }
    }

    /// Vertex-wise sum; exact under the extension principle.
    pub fn add(&self, other: &Tfn) -> Result<Tfn, FuzzyError> {
        if self.unit != other.unit {
            return Err(FuzzyError::UnitMismatch {
                left: self.unit.clone(),
                right: other.unit.clone(),
            });
        }
        Tfn::new(
            self.a + other.a,
            self.b + other.b,
            self.c + other.c,
            self.unit.clone(),
        )
    }

    /// Scale by a nonnegative crisp factor; exact.
    pub fn scale(&self, k: f64) -> Result<Tfn, FuzzyError> {
        if !k.is_finite() || k < 0.0 {
            return Err(FuzzyError::InvalidScale(k));
        }
        Tfn::new(k * self.a, k * self.b, k * self.c, self.unit.clone())
    }

    /// Vertex-rule product for nonnegative TFNs. Agrees with the extension
    /// principle at the support endpoints and peak; triangular approximation
    /// in between.
    pub fn mul(&self, other: &Tfn) -> Result<Tfn, FuzzyError> {
        if !self.is_nonnegative() || !other.is_nonnegative() {
            return Err(FuzzyError::NegativeOperand);
        }
        Tfn::new(
            self.a * other.a,
            self.b * other.b,
            self.c * other.c,
            self.unit.product(&other.unit),
        )
    }

    /// Vertex-rule quotient for a nonnegative dividend and strictly positive
    /// divisor: `(a/c', b/b', c/a')`. Same approximation caveat as [`mul`].
    ///
    /// [`mul`]: Tfn::mul
    pub fn div(&self, other: &Tfn) -> Result<Tfn, FuzzyError> {
        if !self.is_nonnegative() {
            return Err(FuzzyError::NegativeOperand);
        }
        if other.a <= 0.0 {
            return Err(FuzzyError::NonPositiveDivisor);
        }
        Tfn::new(
            self.a / other.c,
            self.b / other.b,
            self.c / other.a,
            self.unit.quotient(&other.unit),
        )
    }

    /// Crisp interval of values with membership at least `alpha`.
    pub fn alpha_cut(&self, alpha: f64) -> Result<AlphaInterval, FuzzyError> {
        if !(0.0..=1.0).contains(&alpha) || alpha.is_nan() {
            return Err(FuzzyError::AlphaOutOfRange(alpha));
        }
        // the affine form can overshoot b by an ulp, which would invert the
        // interval for thin triangles; pin the peak and clamp the branches
        let (lo, hi) = if alpha == 1.0 {
            (self.b, self.b)
        } else {
            (
                (self.a + alpha * (self.b - self.a)).min(self.b),
                (self.c - alpha * (self.c - self.b)).max(self.b),
            )
        };
        AlphaInterval::new(alpha, lo, hi)
    }

    /// Triangle polyline sampled at `levels` uniform alpha levels
    /// (`levels >= 2`, endpoints included).
    pub fn to_curve(&self, levels: usize) -> Result<MembershipCurve, FuzzyError> {
        let grid = uniform_alpha_grid(levels);
        let cuts: Vec<AlphaInterval> = grid
            .iter()
            .map(|&alpha| self.alpha_cut(alpha))
            .collect::<Result<_, _>>()?;
        MembershipCurve::from_cuts(&cuts, self.unit.clone())
    }

    /// Centroid of the triangular membership: `(a + b + c) / 3`.
    ///
    /// This is the simplified form of the ratio
    /// `(c^2 + bc - a^2 - ab) / (3(c - a))`, to which it is algebraically
    /// identical; the simplified form is also well defined for crisp values
    /// where the ratio degenerates to 0/0. [`centroid_quotient`] keeps the
    /// ratio form around as an independent cross-check route.
    pub fn defuzzify_centroid(&self) -> f64 {
        (self.a + self.b + self.c) / 3.0
    }
}

impl fmt::Display for Tfn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)?;
        if !self.unit.is_dimensionless() {
            write!(f, " {}", self.unit)?;
        }
        Ok(())
    }
}

/// Ratio form of the triangular centroid, `(c^2 + bc - a^2 - ab) / (3(c-a))`,
/// falling back to `b` for crisp triples where the ratio is 0/0.
pub fn centroid_quotient(a: f64, b: f64, c: f64) -> f64 {
    if c > a {
        (c * c + b * c - a * a - a * b) / (3.0 * (c - a))
    } else {
        b
    }
}

/// One alpha level of a fuzzy quantity: the crisp interval `[lo, hi]` of
/// values whose membership is at least `alpha`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AlphaInterval {
    alpha: f64,
    lo: f64,
    hi: f64,
}

impl AlphaInterval {
    pub fn new(alpha: f64, lo: f64, hi: f64) -> Result<AlphaInterval, FuzzyError> {
        if !(0.0..=1.0).contains(&alpha) || alpha.is_nan() {
            return Err(FuzzyError::AlphaOutOfRange(alpha));
        }
        if !(lo.is_finite() && hi.is_finite()) || lo > hi {
            return Err(FuzzyError::BadInterval { lo, hi });
        }
        Ok(AlphaInterval { alpha, lo, hi })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

/// How the fuzzy layer evaluates nonlinear formulas.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FuzzyMethod {
    /// Extension-principle intervals per alpha level (default).
    AlphaCut,
    /// Apply the operation to the `(a, b, c)` triples directly.
    Vertex,
}

impl Default for FuzzyMethod {
    fn default() -> Self {
        FuzzyMethod::AlphaCut
    }
}

impl fmt::Display for FuzzyMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FuzzyMethod::AlphaCut => f.write_str("alpha-cut"),
            FuzzyMethod::Vertex => f.write_str("vertex"),
        }
    }
}

/// Default alpha-grid density; dense enough for 1e-6 centroid agreement on
/// triangular memberships.
pub const DEFAULT_ALPHA_LEVELS: usize = 101;

/// Uniform grid of `levels` alpha values covering [0, 1] inclusive.
/// `levels` below 2 is treated as 2 (the endpoints are always required).
pub fn uniform_alpha_grid(levels: usize) -> Vec<f64> {
    let n = levels.max(2);
    (0..n).map(|i| i as f64 / (n - 1) as f64).collect()
}

/// Search strategy for the min/max of a function over an alpha box.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoxSearch {
    /// Evaluate the 2^n interval-endpoint corners plus the coordinate-wise
    /// peak. Exact when the function is monotone in each coordinate.
    Corners,
    /// Dense rectangular sampling for functions that are not coordinate-wise
    /// monotone; resolution is per axis.
    Dense { samples_per_axis: usize },
}

/// Pointwise membership curve: ordered `(x, mu)` polyline with a unit tag.
#[derive(Clone, Debug, PartialEq)]
pub struct MembershipCurve {
    points: Vec<(f64, f64)>,
    unit: Unit,
}

impl MembershipCurve {
    /// Validates and wraps an `(x, mu)` polyline: strictly increasing x,
    /// memberships within [0, 1], quasi-concave with a peak reaching 1.
    pub fn new(points: Vec<(f64, f64)>, unit: Unit) -> Result<MembershipCurve, FuzzyError> {
        if points.is_empty() {
            return Err(FuzzyError::EmptyCurve);
        }
        let mut peak = f64::NEG_INFINITY;
        for (i, &(x, mu)) in points.iter().enumerate() {
            if !x.is_finite() || !mu.is_finite() {
                return Err(FuzzyError::NonFinite { a: x, b: mu, c: f64::NAN });
            }
            if !(0.0..=1.0).contains(&mu) {
                return Err(FuzzyError::MembershipRange);
            }
            if i > 0 && points[i - 1].0 >= x {
                return Err(FuzzyError::NonIncreasingX);
            }
            peak = peak.max(mu);
        }
        if peak < 1.0 - 1e-9 {
            return Err(FuzzyError::MissingPeak);
        }
        // one rise then one fall, plateaus allowed
        let top = points
            .iter()
            .position(|&(_, mu)| mu == peak)
            .expect("peak exists");
        let rising = points.windows(2).take(top).all(|w| w[0].1 <= w[1].1);
        let falling = points.windows(2).skip(top).all(|w| w[0].1 >= w[1].1);
        if !rising || !falling {
            return Err(FuzzyError::NotQuasiConcave);
        }
        Ok(MembershipCurve { points, unit })
    }

    /// Builds the polyline from nested alpha-cuts (any order; the peak level
    /// `alpha = 1` must be present). Vertical edges collapse to their
    /// highest-membership point.
    pub fn from_cuts(cuts: &[AlphaInterval], unit: Unit) -> Result<MembershipCurve, FuzzyError> {
        if cuts.is_empty() {
            return Err(FuzzyError::EmptyCurve);
        }
        let mut sorted: Vec<AlphaInterval> = cuts.to_vec();
        sorted.sort_by(|x, y| x.alpha.total_cmp(&y.alpha));
        sorted.dedup_by(|x, y| x.alpha == y.alpha);

        let mut raw: Vec<(f64, f64)> = Vec::with_capacity(sorted.len() * 2);
        for cut in &sorted {
            raw.push((cut.lo, cut.alpha));
        }
        for cut in sorted.iter().rev() {
            raw.push((cut.hi, cut.alpha));
        }
        let mut points: Vec<(f64, f64)> = Vec::with_capacity(raw.len());
        for (x, mu) in raw {
            match points.last_mut() {
                Some(last) if last.0 == x => {
                    if mu > last.1 {
                        last.1 = mu;
                    }
                }
                _ => points.push((x, mu)),
            }
        }
        MembershipCurve::new(points, unit)
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn unit(&self) -> &Unit {
        &self.unit
    }

    /// x at the (first) membership peak.
    pub fn peak_x(&self) -> f64 {
        let peak = self
            .points
            .iter()
            .map(|&(_, mu)| mu)
            .fold(f64::NEG_INFINITY, f64::max);
        self.points
            .iter()
            .find(|&&(_, mu)| mu == peak)
            .expect("curve is non-empty")
            .0
    }

    /// Support of the curve: the x range it covers.
    pub fn support(&self) -> (f64, f64) {
        (self.points[0].0, self.points[self.points.len() - 1].0)
    }
}

/// Centroid of a membership polyline: exact zeroth and first moments of the
/// piecewise-linear membership, segment by segment (each trapezoid under the
/// polyline contributes its analytic area and moment).
pub fn defuzzify_curve(curve: &MembershipCurve) -> Result<f64, FuzzyError> {
    let mut area = 0.0;
    let mut moment = 0.0;
    for w in curve.points().windows(2) {
        let (x1, m1) = w[0];
        let (x2, m2) = w[1];
        let dx = x2 - x1;
        area += 0.5 * (m1 + m2) * dx;
        moment += dx * (x1 * (2.0 * m1 + m2) + x2 * (m1 + 2.0 * m2)) / 6.0;
    }
    if area <= 0.0 {
        return Err(FuzzyError::ZeroArea);
    }
    Ok(moment / area)
}

/// Min/max of `f` over the alpha box of `inputs` at level `alpha`.
///
/// With [`BoxSearch::Corners`] the bounds are exact for coordinate-wise
/// monotone `f`; [`BoxSearch::Dense`] trades cost for generality.
pub fn alpha_bounds<F>(
    f: &F,
    inputs: &[Tfn],
    alpha: f64,
    search: BoxSearch,
) -> Result<AlphaInterval, FuzzyError>
where
    F: Fn(&[f64]) -> f64,
{
    if inputs.is_empty() {
        return Err(FuzzyError::NoInputs);
    }
    let n = inputs.len();
    if n > 20 {
        return Err(FuzzyError::TooManyInputs(n));
    }
    let cuts: Vec<AlphaInterval> = inputs
        .iter()
        .map(|t| t.alpha_cut(alpha))
        .collect::<Result<_, _>>()?;

    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    let mut point = vec![0.0; n];
    let probe = |point: &[f64], lo: &mut f64, hi: &mut f64| -> Result<(), FuzzyError> {
        let y = f(point);
        if !y.is_finite() {
            return Err(FuzzyError::EvalFailed { point: point.to_vec() });
        }
        *lo = lo.min(y);
        *hi = hi.max(y);
        Ok(())
    };

    match search {
        BoxSearch::Corners => {
            for mask in 0u64..(1u64 << n) {
                for (i, cut) in cuts.iter().enumerate() {
                    point[i] = if mask & (1 << i) == 0 { cut.lo } else { cut.hi };
                }
                probe(&point, &mut lo, &mut hi)?;
            }
            // coordinate-wise peak, always inside the box
            for (i, t) in inputs.iter().enumerate() {
                point[i] = t.b;
            }
            probe(&point, &mut lo, &mut hi)?;
        }
        BoxSearch::Dense { samples_per_axis } => {
            let s = samples_per_axis.max(2);
            let mut idx = vec![0usize; n];
            loop {
                for i in 0..n {
                    let t = idx[i] as f64 / (s - 1) as f64;
                    point[i] = cuts[i].lo + t * cuts[i].width();
                }
                probe(&point, &mut lo, &mut hi)?;
                // odometer increment
                let mut axis = 0;
                loop {
                    if axis == n {
                        return AlphaInterval::new(alpha, lo, hi);
                    }
                    idx[axis] += 1;
                    if idx[axis] < s {
                        break;
                    }
                    idx[axis] = 0;
                    axis += 1;
                }
            }
        }
    }
    AlphaInterval::new(alpha, lo, hi)
}

/// Extension-principle image of `f` over fuzzy `inputs`, evaluated on an
/// alpha grid and returned as a membership polyline tagged with `unit`.
///
/// The grid may come in any order; it is sorted, deduplicated, and always
/// extended with the endpoint levels 0 and 1 so the support and peak are
/// part of every curve. Corner search is used; see [`propagate_with`] for
/// the dense fallback when `f` is not coordinate-wise monotone.
pub fn propagate<F>(
    f: F,
    inputs: &[Tfn],
    alpha_grid: &[f64],
    unit: Unit,
) -> Result<MembershipCurve, FuzzyError>
where
    F: Fn(&[f64]) -> f64,
{
    propagate_with(f, inputs, alpha_grid, BoxSearch::Corners, unit)
}

/// [`propagate`] with an explicit box-search strategy.
pub fn propagate_with<F>(
    f: F,
    inputs: &[Tfn],
    alpha_grid: &[f64],
    search: BoxSearch,
    unit: Unit,
) -> Result<MembershipCurve, FuzzyError>
where
    F: Fn(&[f64]) -> f64,
{
    if alpha_grid.is_empty() {
        return Err(FuzzyError::EmptyGrid);
    }
    if inputs.is_empty() {
        return Err(FuzzyError::NoInputs);
    }
    let mut grid: Vec<f64> = Vec::with_capacity(alpha_grid.len() + 2);
    for &alpha in alpha_grid {
        if !(0.0..=1.0).contains(&alpha) || alpha.is_nan() {
            return Err(FuzzyError::AlphaOutOfRange(alpha));
        }
        grid.push(alpha);
    }
    grid.push(0.0);
    grid.push(1.0);
    grid.sort_by(f64::total_cmp);
    grid.dedup();

    let cuts: Vec<AlphaInterval> = grid
        .iter()
        .map(|&alpha| alpha_bounds(&f, inputs, alpha, search))
        .collect::<Result<_, _>>()?;
    MembershipCurve::from_cuts(&cuts, unit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn tfn(a: f64, b: f64, c: f64) -> Tfn {
        Tfn::new(a, b, c, Unit::DIMENSIONLESS).unwrap()
    }

    /// Independent oracle: interval arithmetic on the operand cuts.
    fn interval_sum(x: &Tfn, y: &Tfn, alpha: f64) -> (f64, f64) {
        let (cx, cy) = (x.alpha_cut(alpha).unwrap(), y.alpha_cut(alpha).unwrap());
        (cx.lo() + cy.lo(), cx.hi() + cy.hi())
    }

    fn interval_quotient(x: &Tfn, y: &Tfn, alpha: f64) -> (f64, f64) {
        let (cx, cy) = (x.alpha_cut(alpha).unwrap(), y.alpha_cut(alpha).unwrap());
        (cx.lo() / cy.hi(), cx.hi() / cy.lo())
    }

    #[test]
    fn rejects_misordered_vertices() {
        assert!(matches!(
            Tfn::new(3.0, 2.0, 1.0, Unit::DIMENSIONLESS),
            Err(FuzzyError::VertexOrder { .. })
        ));
        assert!(matches!(
            Tfn::new(f64::NAN, 0.0, 1.0, Unit::DIMENSIONLESS),
            Err(FuzzyError::NonFinite { .. })
        ));
    }

    #[test]
    fn add_identity_and_shift() {
        let x = tfn(1.0, 2.0, 3.0);
        assert_eq!(x.add(&tfn(0.0, 0.0, 0.0)).unwrap(), x);
        assert_eq!(x.add(&tfn(1.0, 1.0, 1.0)).unwrap(), tfn(2.0, 3.0, 4.0));
    }

    #[test]
    fn add_agrees_with_interval_sum_at_every_level() {
        let x = tfn(1.0, 2.0, 3.0);
        let y = tfn(0.5, 1.0, 4.0);
        let sum = x.add(&y).unwrap();
        assert_eq!(sum, tfn(1.5, 3.0, 7.0));
        for &alpha in &uniform_alpha_grid(101) {
            let cut = sum.alpha_cut(alpha).unwrap();
            let (lo, hi) = interval_sum(&x, &y, alpha);
            assert_abs_diff_eq!(cut.lo(), lo, epsilon = 1e-12);
            assert_abs_diff_eq!(cut.hi(), hi, epsilon = 1e-12);
        }
    }

    #[test]
    fn add_rejects_unit_mismatch() {
        let x = Tfn::new(1.0, 2.0, 3.0, Unit::PER_YEAR).unwrap();
        let y = Tfn::new(1.0, 2.0, 3.0, Unit::YEARS).unwrap();
        assert!(matches!(x.add(&y), Err(FuzzyError::UnitMismatch { .. })));
    }

    #[test]
    fn scale_identity_annihilation_and_half() {
        let x = tfn(1.0, 2.0, 3.0);
        assert_eq!(x.scale(1.0).unwrap(), x);
        assert_eq!(x.scale(0.0).unwrap(), tfn(0.0, 0.0, 0.0));
        // halving a published-style total; oracle below checks the cuts too
        let total = tfn(1.0335, 1.8564, 3.2574);
        let half = total.scale(0.5).unwrap();
        assert_eq!(half, tfn(0.51675, 0.9282, 1.6287));
        for &alpha in &[0.0, 0.25, 0.5, 0.75, 1.0] {
            let cut = half.alpha_cut(alpha).unwrap();
            let orig = total.alpha_cut(alpha).unwrap();
            assert_abs_diff_eq!(cut.lo(), orig.lo() * 0.5, epsilon = 1e-12);
            assert_abs_diff_eq!(cut.hi(), orig.hi() * 0.5, epsilon = 1e-12);
        }
        assert!(matches!(x.scale(-1.0), Err(FuzzyError::InvalidScale(_))));
    }

    #[test]
    fn mul_crisp_unit_is_identity() {
        assert_eq!(
            tfn(1.0, 1.0, 1.0).mul(&tfn(2.0, 3.0, 4.0)).unwrap(),
            tfn(2.0, 3.0, 4.0)
        );
    }

    #[test]
    fn div_by_crisp_divisor() {
        assert_eq!(
            tfn(2.0, 4.0, 8.0).div(&tfn(2.0, 2.0, 2.0)).unwrap(),
            tfn(1.0, 2.0, 4.0)
        );
    }

    #[test]
    fn div_vertex_rule_is_ordered_and_matches_interval_endpoints() {
        let x = tfn(1.0, 2.0, 3.0);
        let y = tfn(1.0, 2.0, 4.0);
        let q = x.div(&y).unwrap();
        assert_eq!(q, tfn(0.25, 1.0, 3.0));
        assert!(q.a() <= q.b() && q.b() <= q.c());
        // the vertex triple coincides with exact interval division at the
        // support and peak levels; in between it is only an approximation
        let (lo0, hi0) = interval_quotient(&x, &y, 0.0);
        assert_abs_diff_eq!(q.a(), lo0, epsilon = 1e-12);
        assert_abs_diff_eq!(q.c(), hi0, epsilon = 1e-12);
        let (lo1, hi1) = interval_quotient(&x, &y, 1.0);
        assert_abs_diff_eq!(q.b(), lo1, epsilon = 1e-12);
        assert_abs_diff_eq!(q.b(), hi1, epsilon = 1e-12);
    }

    #[test]
    fn div_rejects_nonpositive_divisor() {
        assert!(matches!(
            tfn(1.0, 2.0, 3.0).div(&tfn(0.0, 1.0, 2.0)),
            Err(FuzzyError::NonPositiveDivisor)
        ));
    }

    #[test]
    fn alpha_cut_peak_support_midpoint() {
        let x = tfn(1.0, 2.0, 3.0);
        let peak = x.alpha_cut(1.0).unwrap();
        assert_eq!((peak.lo(), peak.hi()), (2.0, 2.0));
        let support = x.alpha_cut(0.0).unwrap();
        assert_eq!((support.lo(), support.hi()), (1.0, 3.0));
        let mid = x.alpha_cut(0.5).unwrap();
        assert_eq!((mid.lo(), mid.hi()), (1.5, 2.5));
        assert!(matches!(
            x.alpha_cut(1.5),
            Err(FuzzyError::AlphaOutOfRange(_))
        ));
    }

    #[test]
    fn propagate_identity_draws_the_triangle() {
        let x = tfn(1.0, 2.0, 3.0);
        let curve = propagate(|v| v[0], &[x], &[0.0, 0.5, 1.0], Unit::DIMENSIONLESS).unwrap();
        assert_eq!(
            curve.points(),
            &[(1.0, 0.0), (1.5, 0.5), (2.0, 1.0), (2.5, 0.5), (3.0, 0.0)]
        );
    }

    #[test]
    fn propagate_sum_with_crisp_shift_matches_tfn_addition() {
        let x = tfn(1.0, 2.0, 3.0);
        let y = tfn(1.0, 1.0, 1.0);
        let grid = uniform_alpha_grid(11);
        let curve =
            propagate(|v| v[0] + v[1], &[x.clone(), y.clone()], &grid, Unit::DIMENSIONLESS)
                .unwrap();
        let sum = x.add(&y).unwrap();
        for &(xv, mu) in curve.points() {
            let cut = sum.alpha_cut(mu).unwrap();
            assert!(
                (xv - cut.lo()).abs() < 1e-12 || (xv - cut.hi()).abs() < 1e-12,
                "({xv}, {mu}) not on triangle {sum}"
            );
        }
    }

    #[test]
    fn propagate_mttf_body_peak_matches_direct_substitution() {
        // ratio-shaped lifetime formula at published-style totals with
        // crisp full coverage; the peak must equal plain substitution
        let lambda2 = tfn(1.0335, 1.8564, 3.2574);
        let lambda1 = tfn(1.6696, 2.9605, 5.1197);
        let coverage = tfn(1.0, 1.0, 1.0);
        let f = |v: &[f64]| (1.0 + (2.0 * v[0] / v[1]) * v[2]) / (2.0 * v[0]);
        let curve = propagate(
            f,
            &[lambda2, lambda1, coverage],
            &uniform_alpha_grid(21),
            Unit::YEARS,
        )
        .unwrap();
        let expected = (1.0 + 2.0 * 1.8564 / 2.9605) / (2.0 * 1.8564);
        assert_abs_diff_eq!(curve.peak_x(), expected, epsilon = 1e-12);
        assert_abs_diff_eq!(curve.peak_x(), 0.6071, epsilon = 1e-4);
    }

    #[test]
    fn propagate_rejects_empty_grid_and_bad_eval() {
        let x = tfn(1.0, 2.0, 3.0);
        assert!(matches!(
            propagate(|v| v[0], &[x.clone()], &[], Unit::DIMENSIONLESS),
            Err(FuzzyError::EmptyGrid)
        ));
        assert!(matches!(
            propagate(|v| (v[0] - 2.0).ln(), &[x], &[0.0, 1.0], Unit::DIMENSIONLESS),
            Err(FuzzyError::EvalFailed { .. })
        ));
    }

    #[test]
    fn dense_search_handles_non_monotone_function() {
        // (x-2)^2 has its minimum inside the box, not at a corner
        let x = tfn(1.0, 2.0, 3.0);
        let f = |v: &[f64]| (v[0] - 2.0) * (v[0] - 2.0);
        let bounds =
            alpha_bounds(&f, &[x], 0.0, BoxSearch::Dense { samples_per_axis: 201 }).unwrap();
        assert_abs_diff_eq!(bounds.lo(), 0.0, epsilon = 1e-4);
        assert_abs_diff_eq!(bounds.hi(), 1.0, epsilon = 1e-12);
        // corner search still sees the interior minimum through the peak probe
        let corner = alpha_bounds(&f, &[tfn(1.0, 2.0, 3.0)], 0.0, BoxSearch::Corners).unwrap();
        assert_abs_diff_eq!(corner.lo(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn centroid_symmetric_and_right_triangles() {
        assert_eq!(tfn(1.0, 2.0, 3.0).defuzzify_centroid(), 2.0);
        assert_eq!(tfn(0.0, 0.0, 3.0).defuzzify_centroid(), 1.0);
        assert_eq!(centroid_quotient(1.0, 2.0, 3.0), 2.0);
        assert_eq!(centroid_quotient(2.0, 2.0, 2.0), 2.0);
    }

    #[test]
    fn centroid_reconstructed_from_published_row() {
        // peak recovered by inverting Def = (a+b+c)/3 against the published
        // support endpoints and defuzzified value of the parallel row
        let b = 3.0 * 4.2871 - 0.3144 - 10.7;
        assert_abs_diff_eq!(b, 1.8469, epsilon = 1e-3);
        let x = tfn(0.3144, b, 10.7);
        assert_abs_diff_eq!(x.defuzzify_centroid(), 4.2871, epsilon = 1e-3);
        assert_abs_diff_eq!(
            centroid_quotient(0.3144, b, 10.7),
            4.2871,
            epsilon = 1e-3
        );
    }

    #[test]
    fn curve_centroid_matches_triangle_centroid() {
        let x = tfn(1.0, 2.0, 3.0);
        let c = defuzzify_curve(&x.to_curve(101).unwrap()).unwrap();
        assert_abs_diff_eq!(c, 2.0, epsilon = 1e-6);

        let right = tfn(0.0, 0.0, 3.0);
        let c = defuzzify_curve(&right.to_curve(101).unwrap()).unwrap();
        assert_abs_diff_eq!(c, 1.0, epsilon = 1e-6);

        // standby-row triple reconstructed from the published Def value
        let b = 3.0 * 1.8536 - 0.7954 - 3.404;
        let standby = tfn(0.7954, b, 3.404);
        let c = defuzzify_curve(&standby.to_curve(101).unwrap()).unwrap();
        assert_abs_diff_eq!(c, 1.8536, epsilon = 1e-3);
    }

    #[test]
    fn curve_centroid_zero_area_is_an_error() {
        let spike = MembershipCurve::new(vec![(2.0, 1.0)], Unit::DIMENSIONLESS).unwrap();
        assert!(matches!(defuzzify_curve(&spike), Err(FuzzyError::ZeroArea)));
    }

    #[test]
    fn curve_validation_rejects_camel_shapes() {
        let camel = vec![(0.0, 0.0), (1.0, 1.0), (2.0, 0.2), (3.0, 1.0), (4.0, 0.0)];
        assert!(matches!(
            MembershipCurve::new(camel, Unit::DIMENSIONLESS),
            Err(FuzzyError::NotQuasiConcave)
        ));
    }

    #[test]
    fn crisp_tfn_collapses_to_a_spike_curve() {
        let crisp = tfn(2.0, 2.0, 2.0);
        let curve = crisp.to_curve(11).unwrap();
        assert_eq!(curve.points(), &[(2.0, 1.0)]);
        assert_eq!(curve.peak_x(), 2.0);
    }
}
