//! Orientation and in-circle predicates.
//!
//! Each predicate first evaluates in floating point and compares against a
//! forward error bound; only when the sign is not certified does it redo the
//! computation in exact rational arithmetic. Every finite `f64` is a dyadic
//! rational, so the fallback is exact for all representable inputs.

use std::cmp::Ordering;

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::Point;

const EPSILON: f64 = f64::EPSILON * 0.5;
const CCW_ERRBOUND: f64 = (3.0 + 16.0 * EPSILON) * EPSILON;
const ICC_ERRBOUND: f64 = (10.0 + 96.0 * EPSILON) * EPSILON;

fn exact(v: f64) -> BigRational {
    BigRational::from_float(v).expect("finite coordinate")
}

fn sign_of(v: &BigRational) -> Ordering {
    if v.is_zero() {
        Ordering::Equal
    } else if v.is_positive() {
        Ordering::Greater
    } else {
        Ordering::Less
    }
}

/// Sign of the signed area of `(a, b, c)`: `Greater` when counterclockwise.
pub fn orient2d(a: Point, b: Point, c: Point) -> Ordering {
    let detleft = (a.x - c.x) * (b.y - c.y);
    let detright = (a.y - c.y) * (b.x - c.x);
    let det = detleft - detright;
    let detsum = if detleft > 0.0 {
        if detright <= 0.0 {
            return det.partial_cmp(&0.0).unwrap();
        }
        detleft + detright
    } else if detleft < 0.0 {
        if detright >= 0.0 {
            return det.partial_cmp(&0.0).unwrap();
        }
        -detleft - detright
    } else {
        return det.partial_cmp(&0.0).unwrap();
    };
    let bound = CCW_ERRBOUND * detsum;
    if det > bound {
        return Ordering::Greater;
    }
    if -det > bound {
        return Ordering::Less;
    }
    orient2d_exact(a, b, c)
}

fn orient2d_exact(a: Point, b: Point, c: Point) -> Ordering {
    let (ax, ay) = (exact(a.x), exact(a.y));
    let (bx, by) = (exact(b.x), exact(b.y));
    let (cx, cy) = (exact(c.x), exact(c.y));
    let det = (&ax - &cx) * (&by - &cy) - (&ay - &cy) * (&bx - &cx);
    sign_of(&det)
}

/// Sign of the in-circle determinant. For counterclockwise `(a, b, c)`,
/// `Greater` means `d` lies strictly inside their circumcircle.
pub fn incircle(a: Point, b: Point, c: Point, d: Point) -> Ordering {
    let (adx, ady) = (a.x - d.x, a.y - d.y);
    let (bdx, bdy) = (b.x - d.x, b.y - d.y);
    let (cdx, cdy) = (c.x - d.x, c.y - d.y);

    let bdxcdy = bdx * cdy;
    let cdxbdy = cdx * bdy;
    let alift = adx * adx + ady * ady;

    let cdxady = cdx * ady;
    let adxcdy = adx * cdy;
    let blift = bdx * bdx + bdy * bdy;

    let adxbdy = adx * bdy;
    let bdxady = bdx * ady;
    let clift = cdx * cdx + cdy * cdy;

    let det = alift * (bdxcdy - cdxbdy) + blift * (cdxady - adxcdy) + clift * (adxbdy - bdxady);
    let permanent = (bdxcdy.abs() + cdxbdy.abs()) * alift
        + (cdxady.abs() + adxcdy.abs()) * blift
        + (adxbdy.abs() + bdxady.abs()) * clift;
    let bound = ICC_ERRBOUND * permanent;
    if det > bound {
        return Ordering::Greater;
    }
    if -det > bound {
        return Ordering::Less;
    }
    incircle_exact(a, b, c, d)
}

fn incircle_exact(a: Point, b: Point, c: Point, d: Point) -> Ordering {
    let (dx, dy) = (exact(d.x), exact(d.y));
    let adx = exact(a.x) - &dx;
    let ady = exact(a.y) - &dy;
    let bdx = exact(b.x) - &dx;
    let bdy = exact(b.y) - &dy;
    let cdx = exact(c.x) - &dx;
    let cdy = exact(c.y) - &dy;
    let alift = &adx * &adx + &ady * &ady;
    let blift = &bdx * &bdx + &bdy * &bdy;
    let clift = &cdx * &cdx + &cdy * &cdy;
    let det = alift * (&bdx * &cdy - &cdx * &bdy)
        + blift * (&cdx * &ady - &adx * &cdy)
        + clift * (&adx * &bdy - &bdx * &ady);
    sign_of(&det)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: f64, y: f64) -> Point {
        Point::new(x, y)
    }

    #[test]
    fn orientation_signs() {
        assert_eq!(orient2d(p(0., 0.), p(1., 0.), p(0., 1.)), Ordering::Greater);
        assert_eq!(orient2d(p(0., 0.), p(0., 1.), p(1., 0.)), Ordering::Less);
        assert_eq!(orient2d(p(0., 0.), p(1., 1.), p(2., 2.)), Ordering::Equal);
    }

    #[test]
    fn near_collinear_resolved_exactly() {
        // The classic failure case: points nearly on the line y = x.
        let a = p(0.5, 0.5);
        let b = p(12.0, 12.0);
        let c = p(24.0, 24.0);
        assert_eq!(orient2d(a, b, c), Ordering::Equal);
        let tiny = p(0.5 + f64::EPSILON, 0.5);
        assert_eq!(orient2d(tiny, b, c), orient2d_exact(tiny, b, c));
        assert_ne!(orient2d(tiny, b, c), Ordering::Equal);
    }

    #[test]
    fn cocircular_is_zero() {
        let (a, b, c) = (p(0., 0.), p(1., 0.), p(0., 1.));
        assert_eq!(incircle(a, b, c, p(1., 1.)), Ordering::Equal);
        assert_eq!(incircle(a, b, c, p(0.25, 0.25)), Ordering::Greater);
        assert_eq!(incircle(a, b, c, p(2., 2.)), Ordering::Less);
    }

    #[test]
    fn filter_agrees_with_exact_on_perturbed_cocircular() {
        let (a, b, c) = (p(0.1, 0.1), p(0.9, 0.1), p(0.1, 0.9));
        for k in 0..64 {
            let d = p(0.9 + k as f64 * f64::EPSILON, 0.9 - (k % 3) as f64 * f64::EPSILON);
            assert_eq!(incircle(a, b, c, d), incircle_exact(a, b, c, d));
        }
    }
}
