//! Small dense complex linear algebra used by the projector and the solver.
//!
//! Fiber dimensions are tiny (ℓ ≤ 16), so everything here is plain dense
//! code on `nalgebra::DMatrix`.

use crate::{CMat, C64};

pub fn eye(n: usize) -> CMat {
    CMat::identity(n, n)
}

pub fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

pub fn scale(m: &CMat, s: f64) -> CMat {
    m * c(s)
}

/// Largest entry modulus.
pub fn max_abs(m: &CMat) -> f64 {
    m.iter().fold(0.0_f64, |acc, z| acc.max(z.norm()))
}

pub fn max_diff(a: &CMat, b: &CMat) -> f64 {
    max_abs(&(a - b))
}

/// `AB + BA`
pub fn anticommutator(a: &CMat, b: &CMat) -> CMat {
    a * b + b * a
}

/// `AB − BA`
pub fn commutator(a: &CMat, b: &CMat) -> CMat {
    a * b - b * a
}

/// Kronecker product.
pub fn kron(a: &CMat, b: &CMat) -> CMat {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    CMat::from_fn(ar * br, ac * bc, |i, j| a[(i / br, j / bc)] * b[(i % br, j % bc)])
}

/// Block diagonal `diag(a, b)`.
pub fn block_diag(a: &CMat, b: &CMat) -> CMat {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    let mut out = CMat::zeros(ar + br, ac + bc);
    out.view_mut((0, 0), (ar, ac)).copy_from(a);
    out.view_mut((ar, ac), (br, bc)).copy_from(b);
    out
}

/// Inverse with a singularity check relative to the matrix scale.
pub fn inverse(m: &CMat, what: &'static str) -> crate::Result<CMat> {
    let lu = m.clone().lu();
    let scale = max_abs(m).max(f64::MIN_POSITIVE);
    let u = lu.u();
    let min_pivot = (0..u.nrows()).map(|i| u[(i, i)].norm()).fold(f64::INFINITY, f64::min);
    if min_pivot <= 1e-14 * scale {
        return Err(crate::Error::Singular(what));
    }
    lu.try_inverse().ok_or(crate::Error::Singular(what))
}

/// Eigenvalues of a general complex matrix.
///
/// Householder reduction to upper Hessenberg form followed by single-shift
/// QR iteration with Wilkinson shifts and deflation. Intended for the small
/// matrices handled here; cost is O(n³) per sweep.
pub fn eigenvalues(m: &CMat) -> Vec<C64> {
    assert!(m.is_square(), "eigenvalues of a non-square matrix");
    let n = m.nrows();
    if n == 0 {
        return Vec::new();
    }
    let mut h = m.clone();
    hessenberg_in_place(&mut h);

    let scale = max_abs(&h).max(f64::MIN_POSITIVE);
    let eps = f64::EPSILON;
    let mut eig = vec![C64::new(0.0, 0.0); n];
    let mut hi = n - 1;
    let mut iter_since_deflation = 0usize;
    let mut total_iter = 0usize;

    loop {
        if hi == 0 {
            eig[0] = h[(0, 0)];
            break;
        }
        // Locate the start of the active unreduced block.
        let mut lo = hi;
        while lo > 0 {
            let sub = h[(lo, lo - 1)].norm();
            let diag = h[(lo, lo)].norm() + h[(lo - 1, lo - 1)].norm();
            if sub <= eps * diag.max(eps * scale) {
                h[(lo, lo - 1)] = C64::new(0.0, 0.0);
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            eig[hi] = h[(hi, hi)];
            hi -= 1;
            iter_since_deflation = 0;
            continue;
        }

        iter_since_deflation += 1;
        total_iter += 1;
        if total_iter > 100 * n {
            // Give up gracefully: report the current diagonal.
            for i in 0..=hi {
                eig[i] = h[(i, i)];
            }
            break;
        }

        let shift = if iter_since_deflation % 11 == 10 {
            // Exceptional shift to break cycles.
            h[(hi, hi)] + C64::new(0.75 * h[(hi, hi - 1)].norm(), 0.0)
        } else {
            wilkinson_shift(h[(hi - 1, hi - 1)], h[(hi - 1, hi)], h[(hi, hi - 1)], h[(hi, hi)])
        };
        qr_sweep(&mut h, lo, hi, shift);
    }
    eig
}

fn hessenberg_in_place(h: &mut CMat) {
    let n = h.nrows();
    if n < 3 {
        return;
    }
    for k in 0..n - 2 {
        let x: Vec<C64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        let alpha_norm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if alpha_norm == 0.0 {
            continue;
        }
        let phase = if x[0].norm() == 0.0 { C64::new(1.0, 0.0) } else { x[0] / x[0].norm() };
        let mut v = x.clone();
        v[0] += phase * alpha_norm;
        let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            continue;
        }
        for z in v.iter_mut() {
            *z /= vnorm;
        }
        // H ← (I − 2vv*) H (I − 2vv*)
        for j in 0..n {
            let mut s = C64::new(0.0, 0.0);
            for (idx, vi) in v.iter().enumerate() {
                s += vi.conj() * h[(k + 1 + idx, j)];
            }
            for (idx, vi) in v.iter().enumerate() {
                h[(k + 1 + idx, j)] -= *vi * s * 2.0;
            }
        }
        for i in 0..n {
            let mut s = C64::new(0.0, 0.0);
            for (idx, vi) in v.iter().enumerate() {
                s += h[(i, k + 1 + idx)] * *vi;
            }
            for (idx, vi) in v.iter().enumerate() {
                h[(i, k + 1 + idx)] -= s * vi.conj() * 2.0;
            }
        }
        for i in k + 2..n {
            h[(i, k)] = C64::new(0.0, 0.0);
        }
    }
}

/// Eigenvalue of the trailing 2×2 block closest to its last diagonal entry.
fn wilkinson_shift(a: C64, b: C64, c: C64, d: C64) -> C64 {
    let tr_half = (a + d) * 0.5;
    let det = a * d - b * c;
    let disc = (tr_half * tr_half - det).sqrt();
    let l1 = tr_half + disc;
    let l2 = tr_half - disc;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// One implicit-free (explicit) shifted QR step on the block `lo..=hi`
/// using Givens rotations.
fn qr_sweep(h: &mut CMat, lo: usize, hi: usize, shift: C64) {
    let n = h.nrows();
    for i in lo..=hi {
        h[(i, i)] -= shift;
    }
    let mut rotations = Vec::with_capacity(hi - lo);
    for k in lo..hi {
        let a = h[(k, k)];
        let b = h[(k + 1, k)];
        let r = (a.norm_sqr() + b.norm_sqr()).sqrt();
        let (cs, sn) = if r == 0.0 { (C64::new(1.0, 0.0), C64::new(0.0, 0.0)) } else { (a / r, b / r) };
        // G = [[c̄, s̄], [−s, c]] applied to rows k, k+1.
        for j in k..n {
            let x = h[(k, j)];
            let y = h[(k + 1, j)];
            h[(k, j)] = cs.conj() * x + sn.conj() * y;
            h[(k + 1, j)] = -sn * x + cs * y;
        }
        rotations.push((cs, sn));
    }
    for (idx, (cs, sn)) in rotations.into_iter().enumerate() {
        let k = lo + idx;
        // Right multiply by G*.
        for i in 0..=(k + 2).min(hi) {
            let x = h[(i, k)];
            let y = h[(i, k + 1)];
            h[(i, k)] = x * cs + y * sn;
            h[(i, k + 1)] = -x * sn.conj() + y * cs.conj();
        }
    }
    for i in lo..=hi {
        h[(i, i)] += shift;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sorted(mut v: Vec<C64>) -> Vec<C64> {
        v.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap().then(a.im.partial_cmp(&b.im).unwrap()));
        v
    }

    #[test]
    fn eigenvalues_of_triangular_matrix_are_its_diagonal() {
        let m = CMat::from_row_slice(
            3,
            3,
            &[c(1.0), c(2.0), c(3.0), c(0.0), c(-4.0), c(5.0), c(0.0), c(0.0), C64::new(0.5, 2.0)],
        );
        let ev = sorted(eigenvalues(&m));
        assert!((ev[0] - c(-4.0)).norm() < 1e-12);
        assert!((ev[1] - C64::new(0.5, 2.0)).norm() < 1e-12);
        assert!((ev[2] - c(1.0)).norm() < 1e-12);
    }

    #[test]
    fn rotation_generator_has_imaginary_spectrum() {
        let m = CMat::from_row_slice(2, 2, &[c(0.0), c(1.0), c(-1.0), c(0.0)]);
        let ev = sorted(eigenvalues(&m));
        assert!((ev[0] - C64::new(0.0, -1.0)).norm() < 1e-12);
        assert!((ev[1] - C64::new(0.0, 1.0)).norm() < 1e-12);
    }

    #[test]
    fn eigenvalues_match_trace_and_determinant_on_dense_matrix() {
        let n = 6;
        let m =
            CMat::from_fn(n, n, |i, j| C64::new(((i * 7 + j * 3) % 5) as f64 - 2.0, ((i + 2 * j) % 3) as f64 - 1.0));
        let ev = eigenvalues(&m);
        let tr: C64 = ev.iter().sum();
        let det: C64 = ev.iter().product();
        assert!((tr - m.trace()).norm() < 1e-10);
        assert!((det - m.determinant()).norm() < 1e-8 * m.determinant().norm().max(1.0));
        for l in &ev {
            let shifted = &m - CMat::identity(n, n) * *l;
            let sv = shifted.svd(false, false).singular_values;
            assert!(sv.min() < 1e-9 * max_abs(&m), "λ = {l} is not an eigenvalue");
        }
    }

    #[test]
    fn jordan_block_eigenvalue_is_recovered() {
        let m = CMat::from_row_slice(2, 2, &[c(2.0), c(1.0), c(0.0), c(2.0)]);
        for l in eigenvalues(&m) {
            assert!((l - c(2.0)).norm() < 1e-7);
        }
    }

    #[test]
    fn kron_of_identities_is_identity() {
        assert_eq!(kron(&eye(2), &eye(3)), eye(6));
    }
}
