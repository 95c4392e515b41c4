//! Planar convex hulls of complex values and distance to them.

use robust::{orient2d, Coord};

use crate::linalg::C64;

pub const DEFAULT_HULL_TOL: f64 = 1e-9;

fn coord(z: C64) -> Coord<f64> {
    Coord { x: z.re, y: z.im }
}

fn orient(a: C64, b: C64, c: C64) -> f64 {
    orient2d(coord(a), coord(b), coord(c))
}

/// Counter-clockwise hull vertices (monotone chain, collinear points dropped).
pub fn convex_hull(points: &[C64]) -> Vec<C64> {
    let mut pts: Vec<C64> = points.to_vec();
    pts.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut lower: Vec<C64> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && orient(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<C64> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && orient(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

fn segment_distance(a: C64, b: C64, q: C64) -> f64 {
    let d = b - a;
    let len2 = d.norm_sqr();
    if len2 == 0.0 {
        return (q - a).norm();
    }
    let t = (((q - a) * d.conj()).re / len2).clamp(0.0, 1.0);
    (q - (a + d * t)).norm()
}

/// Euclidean distance from `q` to the convex hull of `points`; zero inside.
/// Degenerate hulls (a point or a segment) are handled by direct distance.
pub fn hull_distance(points: &[C64], q: C64) -> f64 {
    let hull = convex_hull(points);
    match hull.len() {
        0 => f64::INFINITY,
        1 => (q - hull[0]).norm(),
        2 => segment_distance(hull[0], hull[1], q),
        n => {
            let inside = (0..n).all(|i| orient(hull[i], hull[(i + 1) % n], q) >= 0.0);
            if inside {
                0.0
            } else {
                (0..n)
                    .map(|i| segment_distance(hull[i], hull[(i + 1) % n], q))
                    .fold(f64::INFINITY, f64::min)
            }
        }
    }
}

pub fn in_hull(points: &[C64], q: C64, hull_tol: f64) -> bool {
    hull_distance(points, q) <= hull_tol
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn square_membership() {
        let sq = [c(0.0, 0.0), c(1.0, 0.0), c(1.0, 1.0), c(0.0, 1.0), c(0.5, 0.5)];
        assert_eq!(convex_hull(&sq).len(), 4);
        assert_eq!(hull_distance(&sq, c(0.3, 0.7)), 0.0);
        assert_eq!(hull_distance(&sq, c(1.0, 0.5)), 0.0);
        assert!((hull_distance(&sq, c(2.0, 0.5)) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn degenerate_hulls() {
        let seg = [c(-1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)];
        assert_eq!(convex_hull(&seg).len(), 2);
        assert_eq!(hull_distance(&seg, c(0.25, 0.0)), 0.0);
        assert!((hull_distance(&seg, c(0.0, 0.5)) - 0.5).abs() < 1e-15);
        assert!((hull_distance(&seg, c(2.0, 0.0)) - 1.0).abs() < 1e-15);
        let pt = [c(1.0, 1.0), c(1.0, 1.0)];
        assert_eq!(hull_distance(&pt, c(1.0, 1.0)), 0.0);
        assert!((hull_distance(&pt, c(1.0, 2.0)) - 1.0).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn convex_combinations_are_inside(
            pts in prop::collection::vec((-5.0f64..5.0, -5.0f64..5.0), 1..8),
            w in prop::collection::vec(0.0f64..1.0, 8),
        ) {
            let pts: Vec<C64> = pts.into_iter().map(|(a, b)| c(a, b)).collect();
            let total: f64 = w[..pts.len()].iter().sum::<f64>() + 1e-3;
            let q: C64 = pts.iter().zip(&w).map(|(p, wi)| p * wi).sum::<C64>() / total
                + pts[0] * (1e-3 / total);
            prop_assert!(hull_distance(&pts, q) <= 1e-12);
        }
    }
}
