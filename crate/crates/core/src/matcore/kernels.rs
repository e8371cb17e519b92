//! Dense factorizations, generic over the real scalar.
//!
//! Kept deliberately small: Householder QR (full `Q`), one-sided Jacobi SVD
//! and Gauss–Jordan inversion. Matrices in this domain are small (tens of
//! rows), so accuracy matters far more than asymptotic speed.

use num_complex::Complex;
use num_traits::{One, Zero};

use super::matrix::Matrix;
use super::scalar::{modulus, Real};

/// Thin singular value decomposition `M = U diag(s) V*`.
///
/// `s` is sorted in decreasing order and has `min(rows, cols)` entries.
/// Columns of `u` belonging to zero singular values are zero vectors.
#[derive(Clone, Debug)]
pub struct Svd<R: Real> {
    pub u: Matrix<R>,
    pub s: Vec<R>,
    pub v: Matrix<R>,
}

impl<R: Real> Svd<R> {
    /// Number of singular values strictly above `cutoff`.
    pub fn count_above(&self, cutoff: R) -> usize {
        self.s.iter().take_while(|&&s| s > cutoff).count()
    }

    pub fn largest(&self) -> R {
        self.s.first().copied().unwrap_or_else(R::zero)
    }
}

/// One-sided (Hestenes) Jacobi SVD.
pub fn svd<R: Real>(m: &Matrix<R>) -> Svd<R> {
    if m.rows() < m.cols() {
        let Svd { u, s, v } = tall_svd(&m.adjoint());
        return Svd { u: v, s, v: u };
    }
    tall_svd(m)
}

fn tall_svd<R: Real>(m: &Matrix<R>) -> Svd<R> {
    let (rows, cols) = m.shape();
    // column-major working copies
    let mut g: Vec<Vec<Complex<R>>> = (0..cols).map(|j| (0..rows).map(|i| m[(i, j)]).collect()).collect();
    let mut v: Vec<Vec<Complex<R>>> =
        (0..cols).map(|j| (0..cols).map(|i| if i == j { Complex::one() } else { Complex::zero() }).collect()).collect();

    let tol = R::from_f64(R::EPSILON * (rows.max(1) as f64));
    let negligible = R::from_f64(R::EPSILON * R::EPSILON);
    for _sweep in 0..80 {
        let mut rotated = false;
        for i in 0..cols {
            for j in (i + 1)..cols {
                let (alpha, beta, gamma) = gram(&g[i], &g[j]);
                let gmod = modulus(gamma);
                if gmod == R::zero() || gmod <= tol * alpha.sqrt() * beta.sqrt() {
                    continue;
                }
                // skip a column below unit roundoff of its partner
                let (small, big) = if alpha < beta { (alpha, beta) } else { (beta, alpha) };
                if small <= negligible * big {
                    continue;
                }
                rotated = true;
                let phase = gamma.unscale(gmod);
                let two = R::one() + R::one();
                let zeta = (beta - alpha) / (two * gmod);
                let t = {
                    let mag = R::one() / (zeta.abs() + (R::one() + zeta * zeta).sqrt());
                    if zeta < R::zero() {
                        -mag
                    } else {
                        mag
                    }
                };
                let c = R::one() / (R::one() + t * t).sqrt();
                let s = c * t;
                rotate(&mut g, i, j, c, s, phase);
                rotate(&mut v, i, j, c, s, phase);
            }
        }
        if !rotated {
            break;
        }
    }

    let mut order: Vec<(R, usize)> = g.iter().enumerate().map(|(j, col)| (norm(col), j)).collect();
    order.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap_or(std::cmp::Ordering::Equal));

    let mut u = Matrix::zeros(rows, cols);
    let mut vm = Matrix::zeros(cols, cols);
    let mut s = Vec::with_capacity(cols);
    for (new_j, &(sigma, old_j)) in order.iter().enumerate() {
        s.push(sigma);
        if sigma > R::zero() {
            for i in 0..rows {
                u[(i, new_j)] = g[old_j][i].unscale(sigma);
            }
        }
        for i in 0..cols {
            vm[(i, new_j)] = v[old_j][i];
        }
    }
    Svd { u, s, v: vm }
}

fn gram<R: Real>(a: &[Complex<R>], b: &[Complex<R>]) -> (R, R, Complex<R>) {
    let mut alpha = R::zero();
    let mut beta = R::zero();
    let mut gamma = Complex::zero();
    for (&x, &y) in a.iter().zip(b) {
        alpha += x.norm_sqr();
        beta += y.norm_sqr();
        gamma = gamma + x.conj() * y;
    }
    (alpha, beta, gamma)
}

// [g_i, g_j] <- [c g_i - s ē g_j, s g_i + c ē g_j] where e = phase of g_i* g_j
fn rotate<R: Real>(cols: &mut [Vec<Complex<R>>], i: usize, j: usize, c: R, s: R, phase: Complex<R>) {
    let (left, right) = cols.split_at_mut(j);
    let gi = &mut left[i];
    let gj = &mut right[0];
    let ph = phase.conj();
    for (x, y) in gi.iter_mut().zip(gj.iter_mut()) {
        let yy = *y * ph;
        let xi = *x;
        *x = xi.scale(c) - yy.scale(s);
        *y = xi.scale(s) + yy.scale(c);
    }
}

fn norm<R: Real>(col: &[Complex<R>]) -> R {
    let big = col.iter().fold(R::zero(), |acc, &z| acc.max(modulus(z)));
    if big == R::zero() {
        return big;
    }
    let mut acc = R::zero();
    for &z in col {
        acc += z.unscale(big).norm_sqr();
    }
    big * acc.sqrt()
}

/// Householder QR with the full unitary factor: `M = Q R`, `Q` is
/// `rows×rows`, `R` upper trapezoidal `rows×cols`.
pub fn householder_qr<R: Real>(m: &Matrix<R>) -> (Matrix<R>, Matrix<R>) {
    let (rows, cols) = m.shape();
    let mut r = m.clone();
    let mut q = Matrix::<R>::identity(rows);
    let two = R::one() + R::one();
    for k in 0..cols.min(rows.saturating_sub(1)) {
        let x: Vec<Complex<R>> = (k..rows).map(|i| r[(i, k)]).collect();
        let xnorm = norm(&x);
        if xnorm == R::zero() {
            continue;
        }
        let x0 = x[0];
        let x0mod = modulus(x0);
        let phase = if x0mod == R::zero() { Complex::one() } else { x0.unscale(x0mod) };
        let alpha = -phase.scale(xnorm);
        let mut v = x;
        v[0] = v[0] - alpha;
        let vnorm = norm(&v);
        if vnorm == R::zero() {
            continue;
        }
        for z in &mut v {
            *z = z.unscale(vnorm);
        }
        // R[k.., :] -= 2 v (v* R[k.., :])
        for j in 0..cols {
            let mut dot = Complex::zero();
            for (l, &vl) in v.iter().enumerate() {
                dot = dot + vl.conj() * r[(k + l, j)];
            }
            let dot = dot.scale(two);
            for (l, &vl) in v.iter().enumerate() {
                r[(k + l, j)] = r[(k + l, j)] - vl * dot;
            }
        }
        // Q[:, k..] -= 2 (Q[:, k..] v) v*
        for i in 0..rows {
            let mut dot = Complex::zero();
            for (l, &vl) in v.iter().enumerate() {
                dot = dot + q[(i, k + l)] * vl;
            }
            let dot = dot.scale(two);
            for (l, &vl) in v.iter().enumerate() {
                q[(i, k + l)] = q[(i, k + l)] - dot * vl.conj();
            }
        }
        for i in (k + 1)..rows {
            r[(i, k)] = Complex::zero();
        }
    }
    (q, r)
}

/// Gauss–Jordan inverse with partial pivoting. Returns `None` when a pivot
/// vanishes relative to the matrix scale.
pub fn inverse<R: Real>(m: &Matrix<R>) -> Option<Matrix<R>> {
    assert!(m.is_square(), "inverse of a non-square matrix");
    let n = m.rows();
    let mut a = m.clone();
    let mut inv = Matrix::<R>::identity(n);
    let scale = m.max_norm();
    let tiny = scale * R::from_f64(R::EPSILON * (n.max(1) as f64));
    for col in 0..n {
        let (piv, pmod) =
            (col..n)
                .map(|i| (i, modulus(a[(i, col)])))
                .fold((col, R::zero()), |best, cur| if cur.1 > best.1 { cur } else { best });
        if pmod == R::zero() || pmod <= tiny {
            return None;
        }
        if piv != col {
            for j in 0..n {
                let t = a[(col, j)];
                a[(col, j)] = a[(piv, j)];
                a[(piv, j)] = t;
                let t = inv[(col, j)];
                inv[(col, j)] = inv[(piv, j)];
                inv[(piv, j)] = t;
            }
        }
        let p = a[(col, col)];
        for j in 0..n {
            a[(col, j)] = a[(col, j)] / p;
            inv[(col, j)] = inv[(col, j)] / p;
        }
        for i in 0..n {
            if i == col {
                continue;
            }
            let f = a[(i, col)];
            if f.is_zero() {
                continue;
            }
            for j in 0..n {
                a[(i, j)] = a[(i, j)] - f * a[(col, j)];
                inv[(i, j)] = inv[(i, j)] - f * inv[(col, j)];
            }
        }
    }
    Some(inv)
}
