//! Small dense complex linear algebra: an incremental orthonormal frame
//! (classical Gram-Schmidt with one reorthogonalization pass), orthogonal
//! complements, and rank counts.

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type C64 = Complex64;

pub fn norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Hermitian inner product `<a, b> = sum conj(a_i) b_i`.
pub fn inner(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Bilinear pairing `sum a_i b_i` (integration of a table against weights).
pub fn pair(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn max_abs_diff(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Orthonormal columns built one candidate at a time, together with the
/// triangular factor expressing each accepted candidate in the frame.
#[derive(Debug, Clone, Default)]
pub struct OrthoFrame {
    dim: usize,
    cols: Vec<Vec<C64>>,
    /// `r[k]` holds the coefficients of accepted candidate `k` on `cols[0..=k]`.
    r: Vec<Vec<C64>>,
}

impl OrthoFrame {
    pub fn new(dim: usize) -> Self {
        OrthoFrame {
            dim,
            cols: Vec::new(),
            r: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.cols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cols.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn columns(&self) -> &[Vec<C64>] {
        &self.cols
    }

    /// Projects `v` off the frame `passes` times, returning the residual and
    /// the accumulated frame coefficients.
    fn orthogonalize(&self, v: &[C64], passes: usize) -> (Vec<C64>, Vec<C64>) {
        let mut w = v.to_vec();
        let mut coeffs = vec![C64::new(0.0, 0.0); self.cols.len()];
        for _ in 0..passes {
            for (k, q) in self.cols.iter().enumerate() {
                let c = inner(q, &w);
                coeffs[k] += c;
                for (wi, qi) in w.iter_mut().zip(q) {
                    *wi -= c * qi;
                }
            }
        }
        (w, coeffs)
    }

    /// Accepts `v` when its component off the frame exceeds `rel_tol * |v|`.
    pub fn try_push(&mut self, v: &[C64], rel_tol: f64) -> bool {
        assert_eq!(v.len(), self.dim, "candidate length must match frame dimension");
        let scale = norm(v);
        if scale == 0.0 {
            return false;
        }
        let (w, mut coeffs) = self.orthogonalize(v, 2);
        let rn = norm(&w);
        if rn <= rel_tol * scale {
            return false;
        }
        let q: Vec<C64> = w.iter().map(|z| z / rn).collect();
        coeffs.push(C64::new(rn, 0.0));
        self.cols.push(q);
        self.r.push(coeffs);
        true
    }

    /// `Q^H f`.
    pub fn project(&self, f: &[C64]) -> Vec<C64> {
        self.orthogonalize(f, 1).1
    }

    /// Euclidean distance from `f` to the span of the frame.
    pub fn residual(&self, f: &[C64]) -> f64 {
        norm(&self.orthogonalize(f, 1).0)
    }

    /// Orthogonal projection of `f` onto the span.
    pub fn projection(&self, f: &[C64]) -> Vec<C64> {
        let (w, _) = self.orthogonalize(f, 1);
        f.iter().zip(&w).map(|(a, b)| a - b).collect()
    }

    /// Coefficients `c` with `f ~ sum_k c_k v_k` over the accepted candidates
    /// `v_k` (back substitution in the triangular factor).
    pub fn candidate_coefficients(&self, f: &[C64]) -> Vec<C64> {
        let y = self.project(f);
        let d = self.cols.len();
        let mut c = vec![C64::new(0.0, 0.0); d];
        for i in (0..d).rev() {
            let mut s = y[i];
            for (k, ck) in c.iter().enumerate().skip(i + 1) {
                s -= self.r[k][i] * ck;
            }
            c[i] = s / self.r[i][i];
        }
        c
    }
}

/// Orthonormal basis of the orthogonal complement of the frame's span in
/// `C^dim`, chosen by pivoted Gram-Schmidt on the projected unit vectors
/// (largest remaining norm first, lowest index on ties).
pub fn orthogonal_complement(frame: &OrthoFrame) -> Vec<Vec<C64>> {
    let n = frame.dim();
    let target = n.saturating_sub(frame.len());
    if target == 0 {
        return Vec::new();
    }
    let mut cands: Vec<Vec<C64>> = (0..n)
        .map(|i| {
            let mut e = vec![C64::new(0.0, 0.0); n];
            e[i] = C64::new(1.0, 0.0);
            let (w, _) = frame.orthogonalize(&e, 2);
            w
        })
        .collect();
    let mut out: Vec<Vec<C64>> = Vec::with_capacity(target);
    let mut alive = vec![true; n];
    while out.len() < target {
        let mut best: Option<(f64, usize)> = None;
        for (i, c) in cands.iter().enumerate() {
            if !alive[i] {
                continue;
            }
            let nv = norm(c);
            if best.is_none_or(|(b, _)| nv > b) {
                best = Some((nv, i));
            }
        }
        let Some((nv, i)) = best else { break };
        if nv <= 1e-10 {
            break;
        }
        alive[i] = false;
        let mut q = std::mem::take(&mut cands[i]);
        // reorthogonalize against the frame and the accepted vectors
        for _ in 0..2 {
            for b in frame.columns().iter().chain(out.iter()) {
                let c = inner(b, &q);
                for (qi, bi) in q.iter_mut().zip(b) {
                    *qi -= c * bi;
                }
            }
        }
        let qn = norm(&q);
        for z in q.iter_mut() {
            *z /= qn;
        }
        for (j, c) in cands.iter_mut().enumerate() {
            if alive[j] {
                let coef = inner(&q, c);
                for (cj, qj) in c.iter_mut().zip(&q) {
                    *cj -= coef * qj;
                }
            }
        }
        out.push(q);
    }
    out
}

/// Numerical rank of a list of vectors, relative to the largest singular value.
pub fn rank(vectors: &[Vec<C64>], rel_tol: f64) -> usize {
    let s = singular_values(vectors);
    match s.first() {
        Some(&smax) if smax > 0.0 => s.iter().filter(|&&v| v > rel_tol * smax).count(),
        _ => 0,
    }
}

/// Singular values (descending) of the matrix whose columns are `vectors`.
pub fn singular_values(vectors: &[Vec<C64>]) -> Vec<f64> {
    if vectors.is_empty() || vectors[0].is_empty() {
        return Vec::new();
    }
    let m = column_matrix(vectors);
    let mut s: Vec<f64> = m.singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

pub fn column_matrix(vectors: &[Vec<C64>]) -> DMatrix<C64> {
    let rows = vectors.first().map_or(0, |v| v.len());
    DMatrix::from_fn(rows, vectors.len(), |i, j| vectors[j][i])
}

/// Orthonormal basis of the intersection of the spans of two orthonormal
/// frames, via principal angles: directions whose cosine exceeds `1 - tol`.
pub fn intersection(a: &OrthoFrame, b: &[Vec<C64>], tol: f64) -> Vec<Vec<C64>> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let qa = column_matrix(a.columns());
    let qb = column_matrix(b);
    let cross = qa.adjoint() * &qb;
    let svd = cross.svd(true, false);
    let u = svd.u.expect("left singular vectors requested");
    let mut out = Vec::new();
    for (k, s) in svd.singular_values.iter().enumerate() {
        if *s >= 1.0 - tol {
            let v = &qa * u.column(k);
            out.push(v.iter().copied().collect());
        }
    }
    out
}
