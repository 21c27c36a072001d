//! Segment families on the real line.
//!
//! A [`SegmentFamily`] is an ordered list of `d` intervals `s_i = [α_i, β_i]`
//! tagged with the construction class it came from. The constructors cover
//! the classical unisolvent classes:
//!
//! * **C1**: chains of intervals, `β_i = α_{i+1}`;
//! * **C2**: projections of arcs of constant length `2ρ` centred at the
//!   Chebyshev angles `τ_i = (2i − 1)π / (2d)`;
//! * **C3**: segments sharing their left (or right) endpoint;
//! * **C4**: translates `s + ξ_i` of a reference segment by distinct shifts;
//!
//! plus the symmetric family `[−i, i]`, which is *not* unisolvent.
//!
//! Families are immutable once built. Segments are stored 0-based; the
//! mathematical index `i` of the documentation is `index + 1`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Slack allowed on the admissibility condition `τ_d + ρ ≤ π` so that the
/// boundary case `ρ = π/(2d)` survives rounding.
const ANGLE_SLACK: f64 = 1e-12;

/// A closed interval `[alpha, beta]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Segment {
    alpha: f64,
    beta: f64,
}

impl Segment {
    /// Non-degenerate segment; requires finite endpoints with `alpha < beta`.
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !alpha.is_finite() || !beta.is_finite() {
            return Err(Error::invalid(format!(
                "segment endpoints must be finite, got [{alpha}, {beta}]"
            )));
        }
        if alpha >= beta {
            return Err(Error::invalid(format!(
                "segment must satisfy alpha < beta, got [{alpha}, {beta}]"
            )));
        }
        Ok(Segment { alpha, beta })
    }

    /// Segment collapsed to the single point `x`.
    pub fn point(x: f64) -> Result<Self> {
        if !x.is_finite() {
            return Err(Error::invalid(format!("point must be finite, got {x}")));
        }
        Ok(Segment { alpha: x, beta: x })
    }

    /// Accepts `alpha <= beta`, i.e. possibly degenerate.
    pub fn closed(alpha: f64, beta: f64) -> Result<Self> {
        if alpha == beta {
            Segment::point(alpha)
        } else {
            Segment::new(alpha, beta)
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Measure `|s| = β − α`.
    pub fn length(&self) -> f64 {
        self.beta - self.alpha
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.alpha + self.beta)
    }

    pub fn is_degenerate(&self) -> bool {
        self.alpha == self.beta
    }

    /// The segment shifted by `xi`.
    pub fn translate(&self, xi: f64) -> Segment {
        Segment {
            alpha: self.alpha + xi,
            beta: self.beta + xi,
        }
    }
}

/// Construction class of a family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ClassTag {
    C1,
    C2,
    #[serde(rename = "C3left")]
    C3Left,
    #[serde(rename = "C3right")]
    C3Right,
    C4,
    #[serde(rename = "custom")]
    Custom,
    #[serde(rename = "counterexample")]
    Counterexample,
}

/// Which endpoint a C3 family shares.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

/// Parameters recorded at construction time.
#[derive(Clone, Debug, PartialEq)]
pub enum Construction {
    None,
    /// Half arc-length `ρ` of a C2 family.
    Chebyshev { rho: f64 },
    /// Common endpoint of a C3 family.
    SharedEndpoint { endpoint: f64 },
    /// Reference segment and shifts of a C4 family.
    Translates { reference: Segment, xis: Vec<f64> },
}

/// An ordered collection of `d ≥ 1` segments.
#[derive(Clone, Debug, PartialEq)]
pub struct SegmentFamily {
    segments: Vec<Segment>,
    class: ClassTag,
    construction: Construction,
    allow_degenerate: bool,
}

impl SegmentFamily {
    fn build(segments: Vec<Segment>, class: ClassTag, construction: Construction) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::invalid("a segment family needs at least one segment"));
        }
        let family = SegmentFamily {
            segments,
            class,
            construction,
            allow_degenerate: false,
        };
        if let Some(dup) = family.first_duplicate() {
            return Err(Error::invalid(format!(
                "segments {} and {} coincide",
                dup.0 + 1,
                dup.1 + 1
            )));
        }
        Ok(family)
    }

    /// Chain of `d = breakpoints.len() − 1` consecutive intervals (class C1).
    pub fn chain(breakpoints: &[f64]) -> Result<Self> {
        if breakpoints.len() < 2 {
            return Err(Error::invalid("a chain needs at least two breakpoints"));
        }
        let segments = breakpoints
            .windows(2)
            .map(|w| Segment::new(w[0], w[1]))
            .collect::<Result<Vec<_>>>()
            .map_err(|_| Error::invalid("chain breakpoints must be strictly increasing"))?;
        Self::build(segments, ClassTag::C1, Construction::None)
    }

    /// `d` chained segments of equal length covering `[a, b]`.
    pub fn equidistributed(a: f64, b: f64, d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::invalid("number of segments must be positive"));
        }
        if !(a < b) || !a.is_finite() || !b.is_finite() {
            return Err(Error::invalid(format!("need finite a < b, got a = {a}, b = {b}")));
        }
        let h = (b - a) / d as f64;
        let mut breakpoints: Vec<f64> = (0..=d).map(|k| a + h * k as f64).collect();
        breakpoints[d] = b;
        Self::chain(&breakpoints)
    }

    /// Chebyshev (C2) family `[cos(τ_i + ρ), cos(τ_i − ρ)]`, `τ_i = (2i − 1)π/(2d)`.
    ///
    /// Segments are kept in construction order, so their left endpoints
    /// decrease with `i`.
    pub fn chebyshev(d: usize, rho: f64) -> Result<Self> {
        if d == 0 {
            return Err(Error::invalid("number of segments must be positive"));
        }
        if !(rho > 0.0) || !rho.is_finite() {
            return Err(Error::invalid(format!("arc half-length must be positive, got {rho}")));
        }
        let tau_last = chebyshev_angle(d, d);
        if tau_last + rho > PI + ANGLE_SLACK {
            return Err(Error::invalid(format!(
                "arc half-length {rho} too large for d = {d}: need tau_d + rho <= pi"
            )));
        }
        let segments = (1..=d)
            .map(|i| {
                let tau = chebyshev_angle(i, d);
                Segment::new((tau + rho).min(PI).cos(), (tau - rho).max(0.0).cos())
            })
            .collect::<Result<Vec<_>>>()?;
        Self::build(segments, ClassTag::C2, Construction::Chebyshev { rho })
    }

    /// Segments sharing the endpoint `alpha` (class C3). On the left side the
    /// segments are `[alpha, β_i]`, on the right side `[β_i, alpha]`.
    pub fn shared_endpoint(alpha: f64, betas: &[f64], side: Side) -> Result<Self> {
        if betas.is_empty() {
            return Err(Error::invalid("need at least one free endpoint"));
        }
        for (k, &b) in betas.iter().enumerate() {
            if betas[..k].contains(&b) {
                return Err(Error::invalid(format!("free endpoint {b} repeated")));
            }
        }
        let segments = betas
            .iter()
            .map(|&b| match side {
                Side::Left => Segment::new(alpha, b),
                Side::Right => Segment::new(b, alpha),
            })
            .collect::<Result<Vec<_>>>()
            .map_err(|_| {
                Error::invalid(match side {
                    Side::Left => "left-anchored free endpoints must exceed alpha",
                    Side::Right => "right-anchored free endpoints must be below alpha",
                })
            })?;
        let class = match side {
            Side::Left => ClassTag::C3Left,
            Side::Right => ClassTag::C3Right,
        };
        Self::build(segments, class, Construction::SharedEndpoint { endpoint: alpha })
    }

    /// Translates `s + ξ_i` of a reference segment (class C4).
    pub fn translates(reference: Segment, xis: &[f64]) -> Result<Self> {
        if reference.is_degenerate() {
            return Err(Error::invalid("reference segment must have positive length"));
        }
        if xis.is_empty() {
            return Err(Error::invalid("need at least one shift"));
        }
        for (k, &x) in xis.iter().enumerate() {
            if !x.is_finite() {
                return Err(Error::invalid(format!("shift {x} is not finite")));
            }
            if xis[..k].contains(&x) {
                return Err(Error::invalid(format!("shift {x} repeated")));
            }
        }
        let segments = xis.iter().map(|&x| reference.translate(x)).collect();
        Self::build(
            segments,
            ClassTag::C4,
            Construction::Translates {
                reference,
                xis: xis.to_vec(),
            },
        )
    }

    /// The symmetric family `[−i, i]`, `i = 1..d`.
    pub fn symmetric_counterexample(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::invalid("number of segments must be positive"));
        }
        let segments = (1..=d)
            .map(|i| Segment::new(-(i as f64), i as f64))
            .collect::<Result<Vec<_>>>()?;
        Self::build(segments, ClassTag::Counterexample, Construction::None)
    }

    /// Arbitrary family of non-degenerate segments.
    pub fn custom(segments: Vec<Segment>) -> Result<Self> {
        if let Some(s) = segments.iter().find(|s| s.is_degenerate()) {
            return Err(Error::invalid(format!(
                "degenerate segment [{0}, {0}] needs a normalized family",
                s.alpha
            )));
        }
        Self::build(segments, ClassTag::Custom, Construction::None)
    }

    /// Arbitrary family in normalized mode: segments may collapse to points.
    /// Only meaningful together with the normalized Vandermonde assembly.
    pub fn custom_normalized(segments: Vec<Segment>) -> Result<Self> {
        let mut family = Self::build(segments, ClassTag::Custom, Construction::None)?;
        family.allow_degenerate = true;
        Ok(family)
    }

    pub fn from_pairs(pairs: &[(f64, f64)]) -> Result<Self> {
        let segments = pairs
            .iter()
            .map(|&(a, b)| Segment::new(a, b))
            .collect::<Result<Vec<_>>>()?;
        Self::custom(segments)
    }

    /// Number of segments `d`.
    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Segment> {
        self.segments.iter()
    }

    pub fn class(&self) -> ClassTag {
        self.class
    }

    pub fn construction(&self) -> &Construction {
        &self.construction
    }

    pub fn allows_degenerate(&self) -> bool {
        self.allow_degenerate
    }

    /// Arc half-length of a C2 family.
    pub fn rho(&self) -> Option<f64> {
        match self.construction {
            Construction::Chebyshev { rho } => Some(rho),
            _ => None,
        }
    }

    pub fn max_length(&self) -> f64 {
        self.segments.iter().map(Segment::length).fold(0.0, f64::max)
    }

    pub fn min_length(&self) -> f64 {
        self.segments
            .iter()
            .map(Segment::length)
            .fold(f64::INFINITY, f64::min)
    }

    /// Smallest interval containing every segment.
    pub fn hull(&self) -> (f64, f64) {
        self.segments.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), s| {
            (lo.min(s.alpha), hi.max(s.beta))
        })
    }

    fn first_duplicate(&self) -> Option<(usize, usize)> {
        for (j, s) in self.segments.iter().enumerate() {
            if let Some(i) = self.segments[..j].iter().position(|t| t == s) {
                return Some((i, j));
            }
        }
        None
    }

    /// Checks distinctness, minimal length and the invariants of the class tag.
    pub fn validate(&self, min_length: f64) -> ValidationReport {
        let mut failures = Vec::new();
        let distinct = match self.first_duplicate() {
            Some((i, j)) => {
                failures.push(format!("segments {} and {} coincide", i + 1, j + 1));
                false
            }
            None => true,
        };
        let ordered = self.segments.iter().all(|s| {
            s.alpha < s.beta || (self.allow_degenerate && s.alpha == s.beta)
        });
        if !ordered {
            failures.push("a segment violates alpha < beta".to_string());
        }
        let observed_min = self.min_length();
        let length_ok = observed_min >= min_length;
        if !length_ok {
            failures.push(format!(
                "minimal length {observed_min} below threshold {min_length}"
            ));
        }
        let class_ok = match self.class_violation() {
            Some(msg) => {
                failures.push(msg);
                false
            }
            None => true,
        };
        ValidationReport {
            d: self.len(),
            distinct,
            ordered,
            min_length: observed_min,
            threshold: min_length,
            length_ok,
            class_invariants: class_ok,
            failures,
        }
    }

    fn class_violation(&self) -> Option<String> {
        let s = &self.segments;
        let d = s.len();
        match (&self.class, &self.construction) {
            (ClassTag::C1, _) => (1..d)
                .find(|&i| s[i - 1].beta != s[i].alpha)
                .map(|i| format!("chain broken between segments {i} and {}", i + 1)),
            (ClassTag::C2, Construction::Chebyshev { rho }) => {
                if chebyshev_angle(d, d) + rho > PI + ANGLE_SLACK {
                    return Some(format!("rho = {rho} violates tau_d + rho <= pi"));
                }
                (0..d)
                    .find(|&k| {
                        let tau = chebyshev_angle(k + 1, d);
                        let a = (tau + rho).min(PI).cos();
                        let b = (tau - rho).max(0.0).cos();
                        (s[k].alpha - a).abs() > 4.0 * f64::EPSILON
                            || (s[k].beta - b).abs() > 4.0 * f64::EPSILON
                    })
                    .map(|k| format!("segment {} is not a Chebyshev arc projection", k + 1))
            }
            (ClassTag::C3Left, Construction::SharedEndpoint { endpoint }) => {
                if s.iter().any(|x| x.alpha != *endpoint) {
                    Some("left endpoints are not shared".to_string())
                } else {
                    None
                }
            }
            (ClassTag::C3Right, Construction::SharedEndpoint { endpoint }) => {
                if s.iter().any(|x| x.beta != *endpoint) {
                    Some("right endpoints are not shared".to_string())
                } else {
                    None
                }
            }
            (ClassTag::C4, Construction::Translates { reference, xis }) => {
                if xis.len() != d {
                    return Some("number of shifts differs from number of segments".to_string());
                }
                let len = reference.length();
                (0..d)
                    .find(|&k| {
                        let scale = reference.alpha.abs().max(reference.beta.abs()) + xis[k].abs();
                        (s[k].length() - len).abs() > 4.0 * f64::EPSILON * scale.max(len)
                    })
                    .map(|k| format!("segment {} is not a translate of the reference", k + 1))
            }
            (ClassTag::Counterexample, _) => (0..d)
                .find(|&k| s[k].alpha != -((k + 1) as f64) || s[k].beta != (k + 1) as f64)
                .map(|k| format!("segment {} is not [-{1}, {1}]", k + 1, k + 1)),
            (ClassTag::Custom, _) => None,
            (tag, _) => Some(format!("class {tag:?} lacks its construction parameters")),
        }
    }
}

impl<'a> IntoIterator for &'a SegmentFamily {
    type Item = &'a Segment;
    type IntoIter = std::slice::Iter<'a, Segment>;

    fn into_iter(self) -> Self::IntoIter {
        self.segments.iter()
    }
}

/// `τ_i = (2i − 1)π / (2d)` for the 1-based index `i`.
pub fn chebyshev_angle(i: usize, d: usize) -> f64 {
    (2 * i - 1) as f64 * PI / (2 * d) as f64
}

/// Outcome of [`SegmentFamily::validate`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ValidationReport {
    pub d: usize,
    pub distinct: bool,
    pub ordered: bool,
    pub min_length: f64,
    pub threshold: f64,
    pub length_ok: bool,
    pub class_invariants: bool,
    pub failures: Vec<String>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.distinct && self.ordered && self.length_ok && self.class_invariants
    }
}

// JSON wire format: {"class":"C2","d":8,"rho":0.19635,"segments":[[a1,b1],...]}

#[derive(Serialize, Deserialize)]
struct FamilyWire {
    class: ClassTag,
    d: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    rho: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    endpoint: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    reference: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    xis: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    normalized: bool,
    segments: Vec<[f64; 2]>,
}

impl Serialize for SegmentFamily {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut wire = FamilyWire {
            class: self.class,
            d: self.len(),
            rho: None,
            endpoint: None,
            reference: None,
            xis: None,
            normalized: self.allow_degenerate,
            segments: self.segments.iter().map(|s| [s.alpha, s.beta]).collect(),
        };
        match &self.construction {
            Construction::None => {}
            Construction::Chebyshev { rho } => wire.rho = Some(*rho),
            Construction::SharedEndpoint { endpoint } => wire.endpoint = Some(*endpoint),
            Construction::Translates { reference, xis } => {
                wire.reference = Some([reference.alpha, reference.beta]);
                wire.xis = Some(xis.clone());
            }
        }
        wire.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SegmentFamily {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let wire = FamilyWire::deserialize(deserializer)?;
        let family = SegmentFamily::try_from(wire).map_err(D::Error::custom)?;
        Ok(family)
    }
}

impl TryFrom<FamilyWire> for SegmentFamily {
    type Error = Error;

    fn try_from(wire: FamilyWire) -> Result<Self> {
        if wire.d != wire.segments.len() {
            return Err(Error::invalid(format!(
                "d = {} but {} segments listed",
                wire.d,
                wire.segments.len()
            )));
        }
        let segments = wire
            .segments
            .iter()
            .map(|&[a, b]| {
                if wire.normalized {
                    Segment::closed(a, b)
                } else {
                    Segment::new(a, b)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        let construction = match wire.class {
            ClassTag::C2 => Construction::Chebyshev {
                rho: wire.rho.ok_or_else(|| Error::invalid("C2 family needs rho"))?,
            },
            ClassTag::C3Left | ClassTag::C3Right => Construction::SharedEndpoint {
                endpoint: wire
                    .endpoint
                    .ok_or_else(|| Error::invalid("C3 family needs its shared endpoint"))?,
            },
            ClassTag::C4 => {
                let [a, b] = wire
                    .reference
                    .ok_or_else(|| Error::invalid("C4 family needs its reference segment"))?;
                Construction::Translates {
                    reference: Segment::new(a, b)?,
                    xis: wire.xis.ok_or_else(|| Error::invalid("C4 family needs its shifts"))?,
                }
            }
            _ => Construction::None,
        };
        let mut family = SegmentFamily::build(segments, wire.class, construction)?;
        family.allow_degenerate = wire.normalized;
        let report = family.validate(0.0);
        if !report.passed() {
            return Err(Error::invalid(report.failures.join("; ")));
        }
        Ok(family)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn endpoints(f: &SegmentFamily) -> Vec<(f64, f64)> {
        f.iter().map(|s| (s.alpha(), s.beta())).collect()
    }

    #[test]
    fn chain_examples() {
        let f = SegmentFamily::chain(&[-1.0, 0.0, 1.0]).unwrap();
        assert_eq!(endpoints(&f), vec![(-1.0, 0.0), (0.0, 1.0)]);
        assert_eq!(f.class(), ClassTag::C1);

        let f = SegmentFamily::chain(&[0.0, 1.0, 2.0, 3.0]).unwrap();
        assert!(f.iter().all(|s| s.length() == 1.0));

        assert!(SegmentFamily::chain(&[0.0]).is_err());
        assert!(SegmentFamily::chain(&[0.0, 1.0, 1.0]).is_err());
        assert!(SegmentFamily::chain(&[0.0, 2.0, 1.0]).is_err());
    }

    #[test]
    fn equidistributed_examples() {
        let f = SegmentFamily::equidistributed(-1.0, 1.0, 2).unwrap();
        assert_eq!(endpoints(&f), vec![(-1.0, 0.0), (0.0, 1.0)]);
        let f = SegmentFamily::equidistributed(-1.0, 1.0, 4).unwrap();
        assert!(f.iter().all(|s| s.length() == 0.5));
        assert!(SegmentFamily::equidistributed(1.0, -1.0, 3).is_err());
        assert!(SegmentFamily::equidistributed(-1.0, 1.0, 0).is_err());
    }

    #[test]
    fn chebyshev_examples() {
        let f = SegmentFamily::chebyshev(1, PI / 2.0).unwrap();
        let s = f.segments()[0];
        assert!((s.alpha() + 1.0).abs() < 1e-15 && (s.beta() - 1.0).abs() < 1e-15);

        let f = SegmentFamily::chebyshev(2, PI / 4.0).unwrap();
        let e = endpoints(&f);
        assert!(e[0].0.abs() < 1e-15 && (e[0].1 - 1.0).abs() < 1e-15);
        assert!((e[1].0 + 1.0).abs() < 1e-15 && e[1].1.abs() < 1e-15);

        assert!(SegmentFamily::chebyshev(2, PI).is_err());
        assert!(SegmentFamily::chebyshev(3, 0.0).is_err());
        assert!(SegmentFamily::chebyshev(3, -0.1).is_err());
    }

    #[test]
    fn chebyshev_chain_at_boundary_rho() {
        for d in 1..=40 {
            let f = SegmentFamily::chebyshev(d, PI / (2 * d) as f64).unwrap();
            for i in 1..d {
                let s = f.segments();
                assert!((s[i].beta() - s[i - 1].alpha()).abs() < 1e-12, "d = {d}, i = {i}");
            }
        }
    }

    #[test]
    fn shared_endpoint_examples() {
        let f = SegmentFamily::shared_endpoint(0.0, &[1.0, 2.0, 3.0], Side::Left).unwrap();
        assert_eq!(endpoints(&f), vec![(0.0, 1.0), (0.0, 2.0), (0.0, 3.0)]);
        assert!(SegmentFamily::shared_endpoint(0.0, &[1.0, 1.0, 2.0], Side::Left).is_err());
        assert!(SegmentFamily::shared_endpoint(0.0, &[1.0, -1.0], Side::Left).is_err());

        let f = SegmentFamily::shared_endpoint(1.0, &[0.0, -1.0], Side::Right).unwrap();
        assert_eq!(endpoints(&f), vec![(0.0, 1.0), (-1.0, 1.0)]);
        assert_eq!(f.class(), ClassTag::C3Right);
    }

    #[test]
    fn translate_examples() {
        let unit = Segment::new(0.0, 1.0).unwrap();
        let f = SegmentFamily::translates(unit, &[0.0, 1.0, 2.0]).unwrap();
        assert_eq!(endpoints(&f), vec![(0.0, 1.0), (1.0, 2.0), (2.0, 3.0)]);

        let short = Segment::new(0.0, 0.3).unwrap();
        let f = SegmentFamily::translates(short, &[0.0, 0.1]).unwrap();
        assert!(f.validate(0.0).passed());

        assert!(SegmentFamily::translates(unit, &[0.0, 0.0]).is_err());
        assert!(SegmentFamily::translates(Segment::point(0.0).unwrap(), &[0.0]).is_err());
    }

    #[test]
    fn counterexample_family() {
        let f = SegmentFamily::symmetric_counterexample(3).unwrap();
        assert_eq!(endpoints(&f), vec![(-1.0, 1.0), (-2.0, 2.0), (-3.0, 3.0)]);
        assert_eq!(SegmentFamily::symmetric_counterexample(1).unwrap().len(), 1);
        assert!(SegmentFamily::symmetric_counterexample(0).is_err());
    }

    #[test]
    fn validation_examples() {
        let f = SegmentFamily::equidistributed(-1.0, 1.0, 4).unwrap();
        assert!(f.validate(0.4).passed());
        let r = f.validate(0.6);
        assert!(!r.passed() && !r.length_ok && r.class_invariants);

        let f = SegmentFamily::chebyshev(2, PI / 4.0).unwrap();
        assert!(f.validate(0.5).passed());
    }

    #[test]
    fn constructors_satisfy_their_class() {
        let families = vec![
            SegmentFamily::chain(&[0.0, 0.5, 2.0, 2.1]).unwrap(),
            SegmentFamily::equidistributed(-3.0, 7.0, 13).unwrap(),
            SegmentFamily::chebyshev(17, 0.05).unwrap(),
            SegmentFamily::chebyshev(9, PI / 18.0).unwrap(),
            SegmentFamily::shared_endpoint(-1.0, &[0.5, 0.25, 1.0], Side::Left).unwrap(),
            SegmentFamily::shared_endpoint(1.0, &[0.5, -0.25], Side::Right).unwrap(),
            SegmentFamily::translates(Segment::new(-0.2, 0.3).unwrap(), &[0.0, 0.7, -1.1]).unwrap(),
            SegmentFamily::symmetric_counterexample(6).unwrap(),
        ];
        for f in &families {
            let r = f.validate(0.0);
            assert!(r.passed(), "{:?}: {:?}", f.class(), r.failures);
        }
    }

    #[test]
    fn translates_share_length() {
        let s = Segment::new(0.1, 0.35).unwrap();
        let f = SegmentFamily::translates(s, &[-0.9, -0.4, 0.0, 0.3, 0.6]).unwrap();
        for t in f.iter() {
            assert!((t.length() - s.length()).abs() <= 1e-15 * s.length().max(1.0));
        }
    }

    #[test]
    fn broken_chain_is_reported() {
        let mut f = SegmentFamily::chain(&[0.0, 1.0, 2.0]).unwrap();
        f.segments[1] = Segment::new(1.5, 2.0).unwrap();
        let r = f.validate(0.0);
        assert!(!r.class_invariants);
    }

    #[test]
    fn json_layout() {
        let f = SegmentFamily::chebyshev(2, PI / 4.0).unwrap();
        let json = serde_json::to_string(&f).unwrap();
        assert!(json.starts_with(r#"{"class":"C2","d":2,"rho":0.7853981633974483,"segments":[["#));
        let back: SegmentFamily = serde_json::from_str(&json).unwrap();
        assert_eq!(back, f);

        let f = SegmentFamily::chain(&[-1.0, 0.0, 1.0]).unwrap();
        assert_eq!(
            serde_json::to_string(&f).unwrap(),
            r#"{"class":"C1","d":2,"segments":[[-1.0,0.0],[0.0,1.0]]}"#
        );
    }

    #[test]
    fn json_rejects_inconsistent_class() {
        let bad = r#"{"class":"C1","d":2,"segments":[[-1.0,0.0],[0.5,1.0]]}"#;
        assert!(serde_json::from_str::<SegmentFamily>(bad).is_err());
        let bad = r#"{"class":"custom","d":3,"segments":[[-1.0,0.0],[0.5,1.0]]}"#;
        assert!(serde_json::from_str::<SegmentFamily>(bad).is_err());
    }

    #[test]
    fn normalized_family_accepts_points() {
        let f = SegmentFamily::custom_normalized(vec![
            Segment::point(0.0).unwrap(),
            Segment::new(0.5, 1.0).unwrap(),
        ])
        .unwrap();
        assert!(f.validate(0.0).passed());
        assert!(SegmentFamily::custom(vec![Segment::point(0.0).unwrap()]).is_err());
    }
}
