//! Anchor frames, point configurations and squared-distance triples.
//!
//! All curve algebra works in the normalised frame `p1 = (1, 0)`,
//! `p2 = (-1, 0)`, `p3 = (a, b)`. Arbitrary anchors are mapped there by the
//! complex-affine similarity `T(z) = (2z - p1 - p2) / (p1 - p2)`, followed by
//! a reflection in the x-axis when that leaves `p3` below it, so normalised
//! frames always have `b >= 0`. Both maps keep rational coordinates rational;
//! together they multiply every squared distance by `4 / |p1 p2|^2`.

use std::collections::HashSet;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::exactmath::rational::{format_rational, int, rational_from_json, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PlanePoint {
    pub x: Rational,
    pub y: Rational,
}

impl PlanePoint {
    pub fn new(x: Rational, y: Rational) -> Self {
        PlanePoint { x, y }
    }

    pub fn ints(x: i64, y: i64) -> Self {
        PlanePoint { x: int(x), y: int(y) }
    }

    pub fn dist_sq(&self, o: &PlanePoint) -> Rational {
        let dx = &self.x - &o.x;
        let dy = &self.y - &o.y;
        &dx * &dx + &dy * &dy
    }
}

/// `p3 = (a, b)` with the implied `p1 = (1, 0)` and `p2 = (-1, 0)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AnchorFrame {
    pub a: Rational,
    pub b: Rational,
}

impl AnchorFrame {
    pub fn new(a: Rational, b: Rational) -> Self {
        AnchorFrame { a, b }
    }

    pub fn ints(a: i64, b: i64) -> Self {
        AnchorFrame::new(int(a), int(b))
    }

    pub fn is_collinear(&self) -> bool {
        self.b.is_zero()
    }

    /// `p3` shares its x-coordinate with `p1`.
    pub fn covertical_p1(&self) -> bool {
        self.a.is_one()
    }

    /// `p3` shares its x-coordinate with `p2`.
    pub fn covertical_p2(&self) -> bool {
        self.a == -Rational::one()
    }

    pub fn anchors(&self) -> [PlanePoint; 3] {
        [
            PlanePoint::ints(1, 0),
            PlanePoint::ints(-1, 0),
            PlanePoint::new(self.a.clone(), self.b.clone()),
        ]
    }

    /// Index (1-based) of the anchor equal to `q`, if any.
    pub fn anchor_collision(&self, q: &PlanePoint) -> Option<usize> {
        self.anchors().iter().position(|p| p == q).map(|i| i + 1)
    }

    /// Rejects collinear frames unless diagnostics mode is on.
    pub fn require_noncollinear(&self, collinear_diagnostics: bool) -> Result<()> {
        if self.is_collinear() && !collinear_diagnostics {
            Err(Error::CollinearFrame)
        } else {
            Ok(())
        }
    }
}

/// Squared distances of one point to the three anchors.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DistanceTriple {
    pub to_p1: Rational,
    pub to_p2: Rational,
    pub to_p3: Rational,
}

/// A frame together with the point set `P`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Configuration {
    frame: AnchorFrame,
    points: Vec<PlanePoint>,
}

impl Configuration {
    /// Validates that no point is an anchor and that `P` has no duplicates.
    pub fn new(frame: AnchorFrame, points: Vec<PlanePoint>) -> Result<Self> {
        let mut seen = HashSet::with_capacity(points.len());
        for (i, q) in points.iter().enumerate() {
            if let Some(anchor) = frame.anchor_collision(q) {
                return Err(Error::AnchorCollision { anchor });
            }
            if !seen.insert(q) {
                return Err(Error::DuplicatePoint(i));
            }
        }
        Ok(Configuration { frame, points })
    }

    pub fn frame(&self) -> &AnchorFrame {
        &self.frame
    }

    pub fn points(&self) -> &[PlanePoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn triples(&self) -> Vec<DistanceTriple> {
        self.points
            .iter()
            .map(|q| distance_triple(&self.frame, q).expect("validated configuration"))
            .collect()
    }
}

/// Squared distances from `q` to `p1 = (1,0)`, `p2 = (-1,0)` and `p3 = (a,b)`.
pub fn distance_triple(frame: &AnchorFrame, q: &PlanePoint) -> Result<DistanceTriple> {
    if let Some(anchor) = frame.anchor_collision(q) {
        return Err(Error::AnchorCollision { anchor });
    }
    let y2 = &q.y * &q.y;
    let xm = &q.x - int(1);
    let xp = &q.x + int(1);
    let dx3 = &q.x - &frame.a;
    let dy3 = &q.y - &frame.b;
    Ok(DistanceTriple {
        to_p1: &xm * &xm + &y2,
        to_p2: &xp * &xp + &y2,
        to_p3: &dx3 * &dx3 + &dy3 * &dy3,
    })
}

/// `T(z) = (2z - p1 - p2) / (p1 - p2)` on points viewed as complex numbers.
fn similarity(p1: &PlanePoint, p2: &PlanePoint) -> impl Fn(&PlanePoint) -> PlanePoint {
    let wr = &p1.x - &p2.x;
    let wi = &p1.y - &p2.y;
    let norm = &wr * &wr + &wi * &wi;
    let sr = &p1.x + &p2.x;
    let si = &p1.y + &p2.y;
    move |z| {
        let nr = int(2) * &z.x - &sr;
        let ni = int(2) * &z.y - &si;
        // (nr + i ni)(wr - i wi) / |w|^2
        PlanePoint::new((&nr * &wr + &ni * &wi) / &norm, (&ni * &wr - &nr * &wi) / &norm)
    }
}

/// Maps arbitrary anchors to the normalised frame. Returns the transformed
/// configuration and the factor `4 / |p1 p2|^2` applied to every squared
/// distance.
pub fn normalize(
    p1: &PlanePoint,
    p2: &PlanePoint,
    p3: &PlanePoint,
    points: &[PlanePoint],
) -> Result<(Configuration, Rational)> {
    if p1 == p2 {
        return Err(Error::DegenerateAnchors);
    }
    let anchors = [p1, p2, p3];
    let mut seen = HashSet::with_capacity(points.len());
    for (i, q) in points.iter().enumerate() {
        if let Some(k) = anchors.iter().position(|p| *p == q) {
            return Err(Error::AnchorCollision { anchor: k + 1 });
        }
        if !seen.insert(q) {
            return Err(Error::DuplicatePoint(i));
        }
    }
    let similar = similarity(p1, p2);
    let reflect = similar(p3).y < Rational::zero();
    let t = move |z: &PlanePoint| {
        let w = similar(z);
        if reflect {
            PlanePoint::new(w.x, -w.y)
        } else {
            w
        }
    };
    let scale = int(4) / p1.dist_sq(p2);
    let p3n = t(p3);
    let frame = AnchorFrame::new(p3n.x, p3n.y);
    let config = Configuration::new(frame, points.iter().map(&t).collect())?;
    Ok((config, scale))
}

/// On-disk configuration:
/// `{"p3": ["a","b"], "points": [["x","y"], ...]}` with optional `p1`, `p2`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConfigurationJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p1: Option<[Value; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p2: Option<[Value; 2]>,
    pub p3: [Value; 2],
    pub points: Vec<[Value; 2]>,
}

fn point_from_json(v: &[Value; 2]) -> Result<PlanePoint> {
    Ok(PlanePoint::new(rational_from_json(&v[0])?, rational_from_json(&v[1])?))
}

fn point_to_json(p: &PlanePoint) -> [Value; 2] {
    [Value::String(format_rational(&p.x)), Value::String(format_rational(&p.y))]
}

impl ConfigurationJson {
    /// Builds the configuration, normalising when `p1`/`p2` are present.
    /// The returned factor is 1 for already-normalised input.
    pub fn into_configuration(&self) -> Result<(Configuration, Rational)> {
        let p3 = point_from_json(&self.p3)?;
        let points: Vec<PlanePoint> =
            self.points.iter().map(point_from_json).collect::<Result<_>>()?;
        match (&self.p1, &self.p2) {
            (None, None) => {
                Ok((Configuration::new(AnchorFrame::new(p3.x, p3.y), points)?, Rational::one()))
            }
            (p1, p2) => {
                let p1 = p1.as_ref().map(point_from_json).transpose()?.unwrap_or(PlanePoint::ints(1, 0));
                let p2 = p2.as_ref().map(point_from_json).transpose()?.unwrap_or(PlanePoint::ints(-1, 0));
                normalize(&p1, &p2, &p3, &points)
            }
        }
    }

    pub fn from_configuration(c: &Configuration) -> Self {
        ConfigurationJson {
            p1: None,
            p2: None,
            p3: point_to_json(&PlanePoint::new(c.frame.a.clone(), c.frame.b.clone())),
            points: c.points.iter().map(point_to_json).collect(),
        }
    }
}

pub fn parse_configuration(text: &str) -> Result<(Configuration, Rational)> {
    let j: ConfigurationJson = serde_json::from_str(text)?;
    j.into_configuration()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rational::rat;

    fn triple(a: i64, b: i64, c: i64) -> DistanceTriple {
        DistanceTriple { to_p1: int(a), to_p2: int(b), to_p3: int(c) }
    }

    #[test]
    fn triples_in_unit_frame() {
        let f = AnchorFrame::ints(0, 1);
        assert_eq!(distance_triple(&f, &PlanePoint::ints(0, 0)).unwrap(), triple(1, 1, 1));
        assert_eq!(distance_triple(&f, &PlanePoint::ints(1, 1)).unwrap(), triple(1, 5, 1));
        assert_eq!(distance_triple(&f, &PlanePoint::ints(2, 0)).unwrap(), triple(1, 9, 5));
        assert_eq!(
            distance_triple(&f, &PlanePoint::ints(0, 1)),
            Err(Error::AnchorCollision { anchor: 3 })
        );
    }

    #[test]
    fn normalize_examples() {
        let (c, s) = normalize(
            &PlanePoint::ints(1, 0),
            &PlanePoint::ints(-1, 0),
            &PlanePoint::ints(0, 1),
            &[PlanePoint::ints(3, 4)],
        )
        .unwrap();
        assert_eq!(c.frame(), &AnchorFrame::ints(0, 1));
        assert_eq!(c.points(), &[PlanePoint::ints(3, 4)]);
        assert_eq!(s, int(1));

        let (c, s) =
            normalize(&PlanePoint::ints(0, 0), &PlanePoint::ints(0, 2), &PlanePoint::ints(1, 1), &[])
                .unwrap();
        assert_eq!(c.frame(), &AnchorFrame::ints(0, 1));
        assert_eq!(s, int(1));

        let q = PlanePoint::ints(5, 1);
        let (c, s) = normalize(
            &PlanePoint::ints(0, 0),
            &PlanePoint::ints(4, 0),
            &PlanePoint::ints(2, 2),
            std::slice::from_ref(&q),
        )
        .unwrap();
        assert_eq!(c.frame(), &AnchorFrame::ints(0, 1));
        assert_eq!(s, rat(1, 4));
        // |p1 q|^2 = 26 in the original frame, 26/4 after normalising
        let t = distance_triple(c.frame(), &c.points()[0]).unwrap();
        assert_eq!(t.to_p1, rat(26, 4));
    }

    #[test]
    fn normalize_errors() {
        let o = PlanePoint::ints(0, 0);
        assert_eq!(normalize(&o, &o, &PlanePoint::ints(1, 1), &[]).unwrap_err(), Error::DegenerateAnchors);
        let p2 = PlanePoint::ints(2, 0);
        let p3 = PlanePoint::ints(1, 1);
        assert_eq!(
            normalize(&o, &p2, &p3, std::slice::from_ref(&p3)).unwrap_err(),
            Error::AnchorCollision { anchor: 3 }
        );
        let q = PlanePoint::ints(5, 5);
        assert_eq!(normalize(&o, &p2, &p3, &[q.clone(), q]).unwrap_err(), Error::DuplicatePoint(1));
    }

    #[test]
    fn frame_flags() {
        assert!(AnchorFrame::ints(3, 0).is_collinear());
        assert!(AnchorFrame::ints(1, 2).covertical_p1());
        assert!(AnchorFrame::ints(-1, 2).covertical_p2());
        assert!(AnchorFrame::ints(0, 0).require_noncollinear(false).is_err());
        assert!(AnchorFrame::ints(0, 0).require_noncollinear(true).is_ok());
    }

    #[test]
    fn json_roundtrip() {
        let text = r#"{"p3": ["0", "1"], "points": [["1/2", "3"], [2, "-1"]]}"#;
        let (c, s) = parse_configuration(text).unwrap();
        assert_eq!(s, int(1));
        assert_eq!(c.points()[0], PlanePoint::new(rat(1, 2), int(3)));
        let back = serde_json::to_string(&ConfigurationJson::from_configuration(&c)).unwrap();
        assert_eq!(back, r#"{"p3":["0","1"],"points":[["1/2","3"],["2","-1"]]}"#);
        let with_anchors = r#"{"p1": ["0","0"], "p2": ["0","2"], "p3": ["1","1"], "points": [["3","3"]]}"#;
        let (c, _) = parse_configuration(with_anchors).unwrap();
        assert_eq!(c.frame(), &AnchorFrame::ints(0, 1));
    }
}
