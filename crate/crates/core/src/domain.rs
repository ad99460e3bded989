//! Core domain types: intervals with independently open or closed endpoints,
//! variable ranges, target output ranges, boxes, and the approximate
//! positive domain.
//!
//! Endpoint comparisons use exact floating-point equality everywhere; any
//! inward or outward rounding is the caller's responsibility. All types are
//! immutable after construction and safe to share across threads.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A one-dimensional range whose endpoints are independently open or closed.
///
/// `lo <= hi` always holds; a degenerate interval (`lo == hi`) must be
/// closed on both sides, otherwise it would be empty and is rejected.
/// Infinite endpoints are allowed and are normalized to open, since no real
/// number equals them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "IntervalRepr", into = "IntervalRepr")]
pub struct Interval {
    lo: f64,
    hi: f64,
    lo_closed: bool,
    hi_closed: bool,
}

impl Interval {
    pub fn new(lo: f64, hi: f64, lo_closed: bool, hi_closed: bool) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() {
            return Err(Error::Validation("interval endpoint is NaN".into()));
        }
        if lo > hi {
            return Err(Error::Validation(format!(
                "interval is empty: lo {lo} exceeds hi {hi}"
            )));
        }
        if lo == hi {
            if lo.is_infinite() {
                return Err(Error::Validation(
                    "interval cannot degenerate to an infinite point".into(),
                ));
            }
            if !(lo_closed && hi_closed) {
                return Err(Error::Validation(format!(
                    "degenerate interval at {lo} must be closed on both sides"
                )));
            }
        }
        // No real number equals an infinite endpoint.
        let lo_closed = lo_closed && lo.is_finite();
        let hi_closed = hi_closed && hi.is_finite();
        Ok(Interval {
            lo,
            hi,
            lo_closed,
            hi_closed,
        })
    }

    /// Closed interval `[lo, hi]`.
    pub fn closed(lo: f64, hi: f64) -> Result<Self> {
        Interval::new(lo, hi, true, true)
    }

    /// Right-open interval `[lo, hi)`.
    pub fn closed_open(lo: f64, hi: f64) -> Result<Self> {
        Interval::new(lo, hi, true, false)
    }

    /// Left-open interval `(lo, hi]`.
    pub fn open_closed(lo: f64, hi: f64) -> Result<Self> {
        Interval::new(lo, hi, false, true)
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn lo_closed(&self) -> bool {
        self.lo_closed
    }

    pub fn hi_closed(&self) -> bool {
        self.hi_closed
    }

    /// Exact membership test; NaN is never a member.
    pub fn contains(&self, x: f64) -> bool {
        (x > self.lo || (self.lo_closed && x == self.lo))
            && (x < self.hi || (self.hi_closed && x == self.hi))
    }

    /// Whether the two intervals share at least one point.
    pub fn intersects(&self, other: &Interval) -> bool {
        let (lo, lo_closed) = match self.lo.partial_cmp(&other.lo).unwrap() {
            std::cmp::Ordering::Greater => (self.lo, self.lo_closed),
            std::cmp::Ordering::Less => (other.lo, other.lo_closed),
            std::cmp::Ordering::Equal => (self.lo, self.lo_closed && other.lo_closed),
        };
        let (hi, hi_closed) = match self.hi.partial_cmp(&other.hi).unwrap() {
            std::cmp::Ordering::Less => (self.hi, self.hi_closed),
            std::cmp::Ordering::Greater => (other.hi, other.hi_closed),
            std::cmp::Ordering::Equal => (self.hi, self.hi_closed && other.hi_closed),
        };
        lo < hi || (lo == hi && lo_closed && hi_closed)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let open = if self.lo_closed { '[' } else { '(' };
        let close = if self.hi_closed { ']' } else { ')' };
        write!(
            f,
            "{}{}, {}{}",
            open,
            EndpointDisplay(self.lo),
            EndpointDisplay(self.hi),
            close
        )
    }
}

struct EndpointDisplay(f64);

impl fmt::Display for EndpointDisplay {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == f64::NEG_INFINITY {
            write!(f, "-inf")
        } else if self.0 == f64::INFINITY {
            write!(f, "inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

/// JSON image of an interval. Infinite endpoints serialize as the strings
/// `"-inf"` and `"inf"`; everything else is a plain number.
#[derive(Serialize, Deserialize)]
struct IntervalRepr {
    lo: Endpoint,
    hi: Endpoint,
    lo_closed: bool,
    hi_closed: bool,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Endpoint {
    Num(f64),
    Named(String),
}

impl Endpoint {
    fn value(&self) -> Result<f64> {
        match self {
            Endpoint::Num(v) => Ok(*v),
            Endpoint::Named(s) if s == "inf" => Ok(f64::INFINITY),
            Endpoint::Named(s) if s == "-inf" => Ok(f64::NEG_INFINITY),
            Endpoint::Named(s) => Err(Error::Validation(format!(
                "bad interval endpoint `{s}`: expected a number, \"inf\", or \"-inf\""
            ))),
        }
    }

    fn of(v: f64) -> Endpoint {
        if v == f64::INFINITY {
            Endpoint::Named("inf".into())
        } else if v == f64::NEG_INFINITY {
            Endpoint::Named("-inf".into())
        } else {
            Endpoint::Num(v)
        }
    }
}

impl TryFrom<IntervalRepr> for Interval {
    type Error = Error;

    fn try_from(repr: IntervalRepr) -> Result<Self> {
        Interval::new(
            repr.lo.value()?,
            repr.hi.value()?,
            repr.lo_closed,
            repr.hi_closed,
        )
    }
}

impl From<Interval> for IntervalRepr {
    fn from(iv: Interval) -> Self {
        IntervalRepr {
            lo: Endpoint::of(iv.lo),
            hi: Endpoint::of(iv.hi),
            lo_closed: iv.lo_closed,
            hi_closed: iv.hi_closed,
        }
    }
}

/// An input variable with its initial range `[lo, hi]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "VariableSpecRepr")]
pub struct VariableSpec {
    pub name: String,
    pub lo: f64,
    pub hi: f64,
}

impl VariableSpec {
    pub fn new(name: impl Into<String>, lo: f64, hi: f64) -> Result<Self> {
        let name = name.into();
        let mut chars = name.chars();
        let head_ok = chars
            .next()
            .is_some_and(|c| c.is_ascii_alphabetic() || c == '_');
        if !head_ok || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return Err(Error::Validation(format!(
                "variable name `{name}` is not an identifier"
            )));
        }
        if !lo.is_finite() || !hi.is_finite() {
            return Err(Error::Validation(format!(
                "variable `{name}` range endpoints must be finite"
            )));
        }
        if lo >= hi {
            return Err(Error::Validation(format!(
                "variable `{name}` needs lo < hi, got [{lo}, {hi}]"
            )));
        }
        Ok(VariableSpec { name, lo, hi })
    }
}

#[derive(Deserialize)]
struct VariableSpecRepr {
    name: String,
    lo: f64,
    hi: f64,
}

impl TryFrom<VariableSpecRepr> for VariableSpec {
    type Error = Error;

    fn try_from(repr: VariableSpecRepr) -> Result<Self> {
        VariableSpec::new(repr.name, repr.lo, repr.hi)
    }
}

/// The target output range: a nonempty union of pairwise-disjoint intervals,
/// sorted by lower endpoint.
///
/// Construction canonicalizes the union: intervals that touch at a shared
/// endpoint closed on at least one side are merged, overlapping intervals
/// are rejected.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct TargetRange {
    intervals: Vec<Interval>,
}

impl TargetRange {
    pub fn new(mut intervals: Vec<Interval>) -> Result<Self> {
        if intervals.is_empty() {
            return Err(Error::Validation(
                "target range needs at least one interval".into(),
            ));
        }
        intervals.sort_by(|a, b| {
            a.lo.partial_cmp(&b.lo)
                .unwrap()
                .then(a.hi.partial_cmp(&b.hi).unwrap())
        });
        let mut merged: Vec<Interval> = Vec::with_capacity(intervals.len());
        for iv in intervals {
            match merged.last_mut() {
                None => merged.push(iv),
                Some(prev) => {
                    if iv.lo < prev.hi {
                        return Err(Error::Validation(format!(
                            "target intervals {prev} and {iv} overlap"
                        )));
                    }
                    if iv.lo == prev.hi && (prev.hi_closed || iv.lo_closed) {
                        // Touching with the shared endpoint covered on at
                        // least one side: the union is one interval.
                        *prev = Interval::new(prev.lo, iv.hi, prev.lo_closed, iv.hi_closed)?;
                        continue;
                    }
                    merged.push(iv);
                }
            }
        }
        Ok(TargetRange { intervals: merged })
    }

    /// Single-interval target.
    pub fn from_interval(iv: Interval) -> Self {
        TargetRange {
            intervals: vec![iv],
        }
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    /// Whether the output value `y` lands in the target range.
    pub fn contains(&self, y: f64) -> bool {
        self.intervals.iter().any(|iv| iv.contains(y))
    }

    /// Tightens the target to compensate for model error: each interval's
    /// finite upper endpoint moves down by `margin`, guarding against
    /// estimates that err upward across the requirement bound (the
    /// `[0, 10)`-with-RMSE-1 workflow that shrinks to `[0, 9)`). Lower
    /// endpoints stay put. Intervals that become empty are dropped.
    pub fn shrink(&self, margin: f64) -> Result<TargetRange> {
        if margin.is_nan() || margin < 0.0 {
            return Err(Error::Validation(format!(
                "shrink margin must be nonnegative, got {margin}"
            )));
        }
        let mut kept = Vec::new();
        for iv in &self.intervals {
            let hi = if iv.hi.is_finite() {
                iv.hi - margin
            } else {
                iv.hi
            };
            if hi < iv.lo || (hi == iv.lo && !(iv.lo_closed && iv.hi_closed)) {
                continue;
            }
            kept.push(Interval::new(iv.lo, hi, iv.lo_closed, iv.hi_closed)?);
        }
        if kept.is_empty() {
            return Err(Error::EmptyTarget { margin });
        }
        TargetRange::new(kept)
    }
}

impl<'de> Deserialize<'de> for TargetRange {
    fn deserialize<D>(deserializer: D) -> std::result::Result<Self, D::Error>
    where
        D: serde::Deserializer<'de>,
    {
        let intervals = Vec::<Interval>::deserialize(deserializer)?;
        TargetRange::new(intervals).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for TargetRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, iv) in self.intervals.iter().enumerate() {
            if i > 0 {
                write!(f, " ∪ ")?;
            }
            write!(f, "{iv}")?;
        }
        Ok(())
    }
}

/// Class label of a synthetic training point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Label {
    Inside,
    Outside,
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Inside => write!(f, "Inside"),
            Label::Outside => write!(f, "Outside"),
        }
    }
}

/// An axis-aligned box: the cartesian product of one interval per input
/// variable, in variable order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxRegion {
    pub intervals: Vec<Interval>,
}

impl BoxRegion {
    pub fn new(intervals: Vec<Interval>) -> Self {
        BoxRegion { intervals }
    }

    pub fn dims(&self) -> usize {
        self.intervals.len()
    }

    /// Membership is the conjunction of the per-dimension memberships.
    pub fn contains(&self, point: &[f64]) -> bool {
        debug_assert_eq!(point.len(), self.intervals.len());
        self.intervals
            .iter()
            .zip(point)
            .all(|(iv, &x)| iv.contains(x))
    }

    /// Boxes are disjoint when some dimension's intervals do not intersect.
    pub fn disjoint_from(&self, other: &BoxRegion) -> bool {
        self.intervals
            .iter()
            .zip(&other.intervals)
            .any(|(a, b)| !a.intersects(b))
    }
}

/// The approximate positive domain: the union of the boxes carved from the
/// Inside-labeled leaves of a trained tree, plus the provenance needed to
/// evaluate or refine it. `refined` marks the subset that survived the
/// inner-grid containment test.
///
/// Deserialization checks the invariants (consistent dimensions, positive
/// granularity, pairwise-disjoint boxes), since domain files round-trip
/// through user hands.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ApdRepr")]
pub struct ApproxPositiveDomain {
    pub variables: Vec<VariableSpec>,
    pub target: TargetRange,
    pub granularity: f64,
    pub refined: bool,
    pub boxes: Vec<BoxRegion>,
}

impl ApproxPositiveDomain {
    /// Whether some box contains the point.
    pub fn contains(&self, point: &[f64]) -> bool {
        self.boxes.iter().any(|b| b.contains(point))
    }

    pub fn num_boxes(&self) -> usize {
        self.boxes.len()
    }

    pub fn dims(&self) -> usize {
        self.variables.len()
    }

    fn validate(self) -> Result<Self> {
        if self.variables.is_empty() {
            return Err(Error::Validation("domain has no variables".into()));
        }
        if !self.granularity.is_finite() || self.granularity <= 0.0 {
            return Err(Error::Validation(format!(
                "domain granularity must be positive, got {}",
                self.granularity
            )));
        }
        for b in &self.boxes {
            if b.dims() != self.variables.len() {
                return Err(Error::Validation(format!(
                    "box has {} intervals, domain has {} variables",
                    b.dims(),
                    self.variables.len()
                )));
            }
        }
        for (i, a) in self.boxes.iter().enumerate() {
            for b in &self.boxes[i + 1..] {
                if !a.disjoint_from(b) {
                    return Err(Error::Validation(format!(
                        "domain boxes intersect: {a:?} and {b:?}"
                    )));
                }
            }
        }
        Ok(self)
    }
}

#[derive(Deserialize)]
struct ApdRepr {
    variables: Vec<VariableSpec>,
    target: TargetRange,
    granularity: f64,
    refined: bool,
    boxes: Vec<BoxRegion>,
}

impl TryFrom<ApdRepr> for ApproxPositiveDomain {
    type Error = Error;

    fn try_from(repr: ApdRepr) -> Result<Self> {
        ApproxPositiveDomain {
            variables: repr.variables,
            target: repr.target,
            granularity: repr.granularity,
            refined: repr.refined,
            boxes: repr.boxes,
        }
        .validate()
    }
}

/// A real-valued function of `m` real variables, or a stand-in for a trained
/// regression model.
///
/// `evaluate` must be deterministic for a fixed instance and seed.
/// Implementations declare via [`OutputModel::concurrent_safe`] whether
/// concurrent calls produce results identical to serial calls; the pipeline
/// falls back to serial evaluation otherwise.
pub trait OutputModel: Send + Sync {
    /// Number of input variables.
    fn arity(&self) -> usize;

    /// Evaluates the model at `point` (length must equal `arity`).
    fn evaluate(&self, point: &[f64]) -> Result<f64>;

    /// Whether concurrent evaluation is identical to serial evaluation.
    fn concurrent_safe(&self) -> bool;

    fn check_arity(&self, point: &[f64]) -> Result<()> {
        if point.len() != self.arity() {
            return Err(Error::ArityMismatch {
                expected: self.arity(),
                got: point.len(),
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn interval_membership_endpoint_kinds() {
        let cc = Interval::closed(0.0, 1.0).unwrap();
        assert!(cc.contains(0.0) && cc.contains(1.0) && cc.contains(0.5));
        let co = Interval::closed_open(0.0, 1.0).unwrap();
        assert!(co.contains(0.0) && !co.contains(1.0));
        let oc = Interval::open_closed(0.0, 1.0).unwrap();
        assert!(!oc.contains(0.0) && oc.contains(1.0));
        let oo = Interval::new(0.0, 1.0, false, false).unwrap();
        assert!(!oo.contains(0.0) && !oo.contains(1.0) && oo.contains(0.5));
        assert!(!cc.contains(f64::NAN));
    }

    #[test]
    fn interval_construction_rejects_empty() {
        assert!(Interval::new(1.0, 0.0, true, true).is_err());
        assert!(Interval::new(1.0, 1.0, true, false).is_err());
        assert!(Interval::new(1.0, 1.0, false, false).is_err());
        assert!(Interval::new(1.0, 1.0, true, true).is_ok());
        assert!(Interval::new(f64::NAN, 1.0, true, true).is_err());
    }

    #[test]
    fn infinite_endpoints_normalize_open() {
        let iv = Interval::new(f64::NEG_INFINITY, 2.0, true, false).unwrap();
        assert!(!iv.lo_closed());
        assert!(iv.contains(-1e300));
        assert!(!iv.contains(f64::NEG_INFINITY));
        let up = Interval::new(0.0, f64::INFINITY, true, true).unwrap();
        assert!(!up.hi_closed());
        assert!(up.contains(1e300));
        assert!(!up.contains(f64::INFINITY));
    }

    #[test]
    fn interval_json_round_trip() {
        let iv = Interval::new(f64::NEG_INFINITY, 2.5, false, true).unwrap();
        let json = serde_json::to_string(&iv).unwrap();
        assert_eq!(
            json,
            r#"{"lo":"-inf","hi":2.5,"lo_closed":false,"hi_closed":true}"#
        );
        let back: Interval = serde_json::from_str(&json).unwrap();
        assert_eq!(back, iv);

        let plain = Interval::closed_open(0.0, 9.0).unwrap();
        let json = serde_json::to_string(&plain).unwrap();
        assert_eq!(
            json,
            r#"{"lo":0.0,"hi":9.0,"lo_closed":true,"hi_closed":false}"#
        );
        let back: Interval = serde_json::from_str(&json).unwrap();
        assert_eq!(back, plain);
    }

    #[test]
    fn interval_json_rejects_invalid() {
        let bad = r#"{"lo":2.0,"hi":1.0,"lo_closed":true,"hi_closed":true}"#;
        assert!(serde_json::from_str::<Interval>(bad).is_err());
        let bad_tag = r#"{"lo":"minus-inf","hi":1.0,"lo_closed":true,"hi_closed":true}"#;
        assert!(serde_json::from_str::<Interval>(bad_tag).is_err());
    }

    #[test]
    fn variable_spec_validation() {
        assert!(VariableSpec::new("x1", -1.0, 1.0).is_ok());
        assert!(VariableSpec::new("x1", 1.0, 1.0).is_err());
        assert!(VariableSpec::new("x1", 2.0, 1.0).is_err());
        assert!(VariableSpec::new("1x", 0.0, 1.0).is_err());
        assert!(VariableSpec::new("", 0.0, 1.0).is_err());
        assert!(VariableSpec::new("x 1", 0.0, 1.0).is_err());
        assert!(VariableSpec::new("x1", f64::NEG_INFINITY, 1.0).is_err());
    }

    #[test]
    fn target_contains_closed_endpoint() {
        let t = TargetRange::from_interval(Interval::closed(0.0, 1.0).unwrap());
        assert!(t.contains(1.0));
        assert!(t.contains(0.0));
        assert!(!t.contains(1.0000000000000002));
    }

    #[test]
    fn target_right_open_excludes_bound() {
        // [0, 9) as passed to the method after accounting for model error.
        let t = TargetRange::from_interval(Interval::closed_open(0.0, 9.0).unwrap());
        assert!(!t.contains(9.0));
        assert!(t.contains(8.999999999999998));
    }

    #[test]
    fn target_union_membership() {
        // [3, 3.5] ∪ [5, 6)
        let t = TargetRange::new(vec![
            Interval::closed(3.0, 3.5).unwrap(),
            Interval::closed_open(5.0, 6.0).unwrap(),
        ])
        .unwrap();
        assert!(!t.contains(4.0));
        assert!(t.contains(3.25));
        assert!(t.contains(5.0));
        assert!(!t.contains(6.0));
    }

    #[test]
    fn target_merges_touching_intervals() {
        let t = TargetRange::new(vec![
            Interval::closed(0.0, 1.0).unwrap(),
            Interval::new(1.0, 2.0, false, true).unwrap(),
        ])
        .unwrap();
        assert_eq!(t.intervals().len(), 1);
        assert_eq!(t.intervals()[0], Interval::closed(0.0, 2.0).unwrap());

        // Shared endpoint open on both sides: kept separate, 1.0 excluded.
        let gap = TargetRange::new(vec![
            Interval::closed_open(0.0, 1.0).unwrap(),
            Interval::new(1.0, 2.0, false, true).unwrap(),
        ])
        .unwrap();
        assert_eq!(gap.intervals().len(), 2);
        assert!(!gap.contains(1.0));
    }

    #[test]
    fn target_rejects_overlap() {
        assert!(TargetRange::new(vec![
            Interval::closed(0.0, 2.0).unwrap(),
            Interval::closed(1.0, 3.0).unwrap(),
        ])
        .is_err());
        // Touching with both endpoints closed merges rather than erroring.
        let merged = TargetRange::new(vec![
            Interval::closed(0.0, 1.0).unwrap(),
            Interval::closed(1.0, 2.0).unwrap(),
        ])
        .unwrap();
        assert_eq!(merged.intervals(), &[Interval::closed(0.0, 2.0).unwrap()]);
    }

    #[test]
    fn shrink_upper_endpoint_by_model_error() {
        // [0, 10) with a margin of 1 (RMSE 0.97 rounded up) gives [0, 9).
        let t = TargetRange::from_interval(Interval::closed_open(0.0, 10.0).unwrap());
        let s = t.shrink(1.0).unwrap();
        assert_eq!(s.intervals(), &[Interval::closed_open(0.0, 9.0).unwrap()]);
    }

    #[test]
    fn shrink_zero_margin_is_identity() {
        let t = TargetRange::from_interval(Interval::closed(0.0, 1.0).unwrap());
        assert_eq!(t.shrink(0.0).unwrap(), t);
    }

    #[test]
    fn shrink_can_empty_the_target() {
        let t = TargetRange::from_interval(Interval::closed(0.0, 1.0).unwrap());
        match t.shrink(1.5) {
            Err(Error::EmptyTarget { margin }) => assert_eq!(margin, 1.5),
            other => panic!("expected EmptyTarget, got {other:?}"),
        }
        // Degenerate survivor: [0, 1] with margin 1 collapses to the point 0.
        let s = t.shrink(1.0).unwrap();
        assert_eq!(s.intervals(), &[Interval::closed(0.0, 0.0).unwrap()]);
        assert!(s.contains(0.0));
    }

    #[test]
    fn shrink_drops_only_emptied_intervals() {
        let t = TargetRange::new(vec![
            Interval::closed(0.0, 0.5).unwrap(),
            Interval::closed(2.0, 5.0).unwrap(),
        ])
        .unwrap();
        let s = t.shrink(1.0).unwrap();
        assert_eq!(s.intervals(), &[Interval::closed(2.0, 4.0).unwrap()]);
    }

    #[test]
    fn shrink_ignores_infinite_endpoints() {
        let t = TargetRange::from_interval(
            Interval::new(f64::NEG_INFINITY, 10.0, false, false).unwrap(),
        );
        let s = t.shrink(1.0).unwrap();
        assert_eq!(
            s.intervals(),
            &[Interval::new(f64::NEG_INFINITY, 9.0, false, false).unwrap()]
        );
    }

    #[test]
    fn box_disjointness() {
        let a = BoxRegion::new(vec![
            Interval::closed(0.0, 1.0).unwrap(),
            Interval::closed(0.0, 1.0).unwrap(),
        ]);
        let b = BoxRegion::new(vec![
            Interval::open_closed(1.0, 2.0).unwrap(),
            Interval::closed(0.0, 1.0).unwrap(),
        ]);
        assert!(a.disjoint_from(&b));
        let c = BoxRegion::new(vec![
            Interval::closed(1.0, 2.0).unwrap(),
            Interval::closed(0.5, 1.5).unwrap(),
        ]);
        assert!(!a.disjoint_from(&c)); // share the point (1, 1)
    }

    fn arb_interval() -> impl Strategy<Value = Interval> {
        (-100.0f64..100.0, 0.0f64..50.0, any::<bool>(), any::<bool>()).prop_map(
            |(lo, width, lc, hc)| {
                if width == 0.0 {
                    Interval::closed(lo, lo).unwrap()
                } else {
                    Interval::new(lo, lo + width, lc, hc).unwrap()
                }
            },
        )
    }

    proptest! {
        #[test]
        fn strict_interior_membership_ignores_endpoint_kinds(
            iv in arb_interval(),
            t in 0.0001f64..0.9999,
        ) {
            let x = iv.lo() + t * (iv.hi() - iv.lo());
            if x > iv.lo() && x < iv.hi() {
                prop_assert!(iv.contains(x));
            }
        }

        #[test]
        fn box_membership_is_conjunction(
            ivs in proptest::collection::vec(arb_interval(), 1..5),
            coords in proptest::collection::vec(-150.0f64..150.0, 5),
        ) {
            let point: Vec<f64> = coords[..ivs.len()].to_vec();
            let b = BoxRegion::new(ivs.clone());
            let expected = ivs.iter().zip(&point).all(|(iv, &x)| iv.contains(x));
            prop_assert_eq!(b.contains(&point), expected);
        }

        #[test]
        fn apd_membership_invariant_under_box_order(
            seed in any::<u64>(),
        ) {
            use crate::rng::CounterRng;
            let mut rng = CounterRng::new(seed);
            let variables = vec![
                VariableSpec::new("x1", -1.0, 1.0).unwrap(),
                VariableSpec::new("x2", -1.0, 1.0).unwrap(),
            ];
            // A few disjoint boxes side by side along x1.
            let mut boxes = Vec::new();
            let cuts = [-1.0, -0.5, 0.1, 0.4, 1.0];
            for w in cuts.windows(2) {
                boxes.push(BoxRegion::new(vec![
                    Interval::open_closed(w[0], w[1]).unwrap(),
                    Interval::closed(-1.0, 1.0).unwrap(),
                ]));
            }
            let apd = ApproxPositiveDomain {
                variables: variables.clone(),
                target: TargetRange::from_interval(Interval::closed(0.0, 1.0).unwrap()),
                granularity: 0.2,
                refined: false,
                boxes: boxes.clone(),
            };
            let mut reversed = apd.clone();
            reversed.boxes.reverse();
            for _ in 0..32 {
                let p = [rng.next_uniform(-1.2, 1.2), rng.next_uniform(-1.2, 1.2)];
                prop_assert_eq!(apd.contains(&p), reversed.contains(&p));
            }
        }
    }
}
