//! Convex hull by gift wrapping.

use num_complex::Complex64;

/// Relative collinearity tolerance for orientation tests.
pub const COLLINEAR_TOL: f64 = 1e-12;

fn cross(a: Complex64, b: Complex64) -> f64 {
    a.re * b.im - a.im * b.re
}

/// Sign of the turn `p → q → r`: `1` left, `-1` right, `0` collinear
/// within [`COLLINEAR_TOL`].
pub fn orientation(p: Complex64, q: Complex64, r: Complex64) -> i8 {
    let (u, v) = (q - p, r - p);
    let x = cross(u, v);
    if x.abs() <= COLLINEAR_TOL * u.norm() * v.norm() {
        0
    } else if x > 0.0 {
        1
    } else {
        -1
    }
}

/// Counterclockwise hull starting from the lowest of the leftmost points.
/// Collinear boundary points are dropped; one or two distinct inputs come
/// back as a degenerate point or segment.
pub fn convex_hull(points: &[Complex64]) -> Vec<Complex64> {
    let mut pts: Vec<Complex64> = points.iter().copied().filter(|p| p.is_finite()).collect();
    pts.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    pts.dedup();
    if pts.len() <= 1 {
        return pts;
    }

    let start = 0;
    let mut hull = vec![pts[start]];
    let mut current = start;
    for _ in 0..pts.len() {
        let mut next = if current == 0 { 1 } else { 0 };
        for r in 0..pts.len() {
            if r == current || r == next {
                continue;
            }
            let (p, q, x) = (pts[current], pts[next], pts[r]);
            match orientation(p, q, x) {
                -1 => next = r,
                0 if (x - p).norm_sqr() > (q - p).norm_sqr() => next = r,
                _ => {}
            }
        }
        if next == start {
            break;
        }
        hull.push(pts[next]);
        current = next;
    }
    hull
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn interior_point_dropped() {
        let h = convex_hull(&[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0), c(0.25, 0.25)]);
        assert_eq!(h, vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0)]);
    }

    #[test]
    fn collinear_set_gives_segment() {
        let h = convex_hull(&[c(0.0, 0.0), c(1.0, 0.0), c(2.0, 0.0)]);
        assert_eq!(h, vec![c(0.0, 0.0), c(2.0, 0.0)]);
    }

    #[test]
    fn tiny_inputs() {
        assert_eq!(convex_hull(&[c(3.0, 4.0)]), vec![c(3.0, 4.0)]);
        assert_eq!(convex_hull(&[c(3.0, 4.0), c(3.0, 4.0)]), vec![c(3.0, 4.0)]);
        assert_eq!(convex_hull(&[c(1.0, 0.0), c(0.0, 0.0)]).len(), 2);
        assert!(convex_hull(&[]).is_empty());
    }

    #[test]
    fn square_with_edge_midpoints() {
        let mut pts = vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 1.0), c(0.0, 1.0)];
        pts.extend([
            c(0.5, 0.0),
            c(1.0, 0.5),
            c(0.5, 1.0),
            c(0.0, 0.5),
            c(0.5, 0.5),
        ]);
        assert_eq!(
            convex_hull(&pts),
            vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 1.0), c(0.0, 1.0)]
        );
    }

    fn cloud() -> impl Strategy<Value = Vec<Complex64>> {
        prop::collection::vec(
            (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(x, y)| c(x, y)),
            3..60,
        )
    }

    fn strictly_convex_ccw(h: &[Complex64]) -> bool {
        let n = h.len();
        n < 3 || (0..n).all(|i| orientation(h[i], h[(i + 1) % n], h[(i + 2) % n]) == 1)
    }

    proptest! {
        #[test]
        fn hull_is_idempotent(pts in cloud()) {
            let h = convex_hull(&pts);
            prop_assert_eq!(convex_hull(&h), h.clone());
            prop_assert!(strictly_convex_ccw(&h));
        }

        #[test]
        fn hull_ignores_order_and_interior_points(pts in cloud(), seed in any::<u64>()) {
            let h = convex_hull(&pts);
            let mut shuffled = pts.clone();
            let n = shuffled.len();
            let mut s = seed;
            for i in (1..n).rev() {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                shuffled.swap(i, (s >> 33) as usize % (i + 1));
            }
            // centroid of the hull vertices is interior
            let centroid = h.iter().sum::<Complex64>() / h.len() as f64;
            shuffled.push(centroid);
            prop_assert_eq!(convex_hull(&shuffled), h);
        }
    }
}
