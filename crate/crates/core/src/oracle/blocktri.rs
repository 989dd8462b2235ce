//! Block tridiagonal matrices with `ℓ × ℓ` blocks and the block Thomas solve.
//!
//! Blocks are stored flat and row-major; the time loop refactors
//! `Id + τA` at every step, so per-block heap allocation would dominate.

use crate::{CMat, Error, Result, C64};

/// Row `i` reads `lower[i]·x[i−1] + diag[i]·x[i] + upper[i]·x[i+1]`;
/// `lower[0]` and `upper[n−1]` are ignored.
#[derive(Debug, Clone)]
pub struct BlockTridiag {
    l: usize,
    n: usize,
    lower: Vec<C64>,
    diag: Vec<C64>,
    upper: Vec<C64>,
}

fn flatten(blocks: &[CMat], l: usize) -> Vec<C64> {
    let mut out = Vec::with_capacity(blocks.len() * l * l);
    for b in blocks {
        assert_eq!(b.shape(), (l, l), "block shape");
        for i in 0..l {
            for j in 0..l {
                out.push(b[(i, j)]);
            }
        }
    }
    out
}

/// `out += alpha·a·b`, `a` is `l × l`, `b` and `out` are `l × cols`.
fn mul_acc(out: &mut [C64], a: &[C64], b: &[C64], l: usize, cols: usize, alpha: C64) {
    for i in 0..l {
        for k in 0..l {
            let aik = a[i * l + k] * alpha;
            if aik == C64::new(0.0, 0.0) {
                continue;
            }
            for j in 0..cols {
                out[i * cols + j] += aik * b[k * cols + j];
            }
        }
    }
}

/// In-place LU with partial pivoting; `false` if a pivot vanishes.
fn lu_in_place(m: &mut [C64], piv: &mut [usize], l: usize) -> bool {
    for k in 0..l {
        let p = (k..l).max_by(|&a, &b| m[a * l + k].norm().total_cmp(&m[b * l + k].norm())).unwrap_or(k);
        if m[p * l + k].norm() == 0.0 {
            return false;
        }
        piv[k] = p;
        if p != k {
            for j in 0..l {
                m.swap(k * l + j, p * l + j);
            }
        }
        let inv = C64::new(1.0, 0.0) / m[k * l + k];
        for i in k + 1..l {
            let f = m[i * l + k] * inv;
            m[i * l + k] = f;
            for j in k + 1..l {
                let mkj = m[k * l + j];
                m[i * l + j] -= f * mkj;
            }
        }
    }
    true
}

/// Solves in place for an `l × cols` right-hand side.
fn lu_solve(m: &[C64], piv: &[usize], b: &mut [C64], l: usize, cols: usize) {
    for (k, &p) in piv.iter().enumerate().take(l) {
        if p != k {
            for j in 0..cols {
                b.swap(k * cols + j, p * cols + j);
            }
        }
    }
    for i in 0..l {
        for k in 0..i {
            let f = m[i * l + k];
            for j in 0..cols {
                let bk = b[k * cols + j];
                b[i * cols + j] -= f * bk;
            }
        }
    }
    for i in (0..l).rev() {
        for k in i + 1..l {
            let f = m[i * l + k];
            for j in 0..cols {
                let bk = b[k * cols + j];
                b[i * cols + j] -= f * bk;
            }
        }
        let inv = C64::new(1.0, 0.0) / m[i * l + i];
        for j in 0..cols {
            b[i * cols + j] *= inv;
        }
    }
}

/// Scratch buffers reused across solves.
#[derive(Debug, Clone, Default)]
pub struct Workspace {
    cp: Vec<C64>,
    m: Vec<C64>,
    piv: Vec<usize>,
    ax: Vec<C64>,
}

impl BlockTridiag {
    pub fn from_blocks(lower: &[CMat], diag: &[CMat], upper: &[CMat]) -> Self {
        let n = diag.len();
        assert!(n > 0 && lower.len() == n && upper.len() == n, "block counts");
        let l = diag[0].nrows();
        Self { l, n, lower: flatten(lower, l), diag: flatten(diag, l), upper: flatten(upper, l) }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn block_size(&self) -> usize {
        self.l
    }

    /// `out = self·x` for block vectors stored flat (`n·ℓ` entries).
    pub fn apply(&self, x: &[C64], out: &mut [C64]) {
        let (l, n, ll) = (self.l, self.n, self.l * self.l);
        out.fill(C64::new(0.0, 0.0));
        let one = C64::new(1.0, 0.0);
        for i in 0..n {
            let o = &mut out[i * l..(i + 1) * l];
            mul_acc(o, &self.diag[i * ll..(i + 1) * ll], &x[i * l..(i + 1) * l], l, 1, one);
            if i > 0 {
                mul_acc(o, &self.lower[i * ll..(i + 1) * ll], &x[(i - 1) * l..i * l], l, 1, one);
            }
            if i + 1 < n {
                mul_acc(o, &self.upper[i * ll..(i + 1) * ll], &x[(i + 1) * l..(i + 2) * l], l, 1, one);
            }
        }
    }

    /// Solves `(Id + s·self)x = b` in place by block Thomas elimination
    /// without inter-block pivoting; used for `Id + τD_h`, which is block
    /// diagonally dominant for small `h`.
    pub fn solve_shifted(&self, s: C64, b: &mut [C64], ws: &mut Workspace) -> Result<()> {
        let (l, n, ll) = (self.l, self.n, self.l * self.l);
        ws.cp.resize(n * ll, C64::new(0.0, 0.0));
        ws.m.resize(ll, C64::new(0.0, 0.0));
        ws.piv.resize(l, 0);
        for i in 0..n {
            let blk = i * ll..(i + 1) * ll;
            for (dst, src) in ws.m.iter_mut().zip(&self.diag[blk.clone()]) {
                *dst = src * s;
            }
            for d in 0..l {
                ws.m[d * l + d] += C64::new(1.0, 0.0);
            }
            if i > 0 {
                let low = &self.lower[blk.clone()];
                mul_acc(&mut ws.m, low, &ws.cp[(i - 1) * ll..i * ll], l, l, -s);
                let (done, rest) = b.split_at_mut(i * l);
                mul_acc(&mut rest[..l], low, &done[(i - 1) * l..], l, 1, -s);
            }
            if !lu_in_place(&mut ws.m, &mut ws.piv, l) {
                return Err(Error::Singular("block tridiagonal solve"));
            }
            if i + 1 < n {
                let cp = &mut ws.cp[blk.clone()];
                for (dst, src) in cp.iter_mut().zip(&self.upper[blk]) {
                    *dst = src * s;
                }
                lu_solve(&ws.m, &ws.piv, cp, l, l);
            }
            lu_solve(&ws.m, &ws.piv, &mut b[i * l..(i + 1) * l], l, 1);
        }
        for i in (0..n - 1).rev() {
            let (head, tail) = b.split_at_mut((i + 1) * l);
            mul_acc(&mut head[i * l..], &ws.cp[i * ll..(i + 1) * ll], &tail[..l], l, 1, C64::new(-1.0, 0.0));
        }
        Ok(())
    }

    /// One Crank–Nicolson step `x ← (Id + ½τA)⁻¹(Id − ½τA)x`.
    pub fn crank_nicolson_step(&self, x: &mut [C64], tau: f64, ws: &mut Workspace) -> Result<()> {
        let mut ax = std::mem::take(&mut ws.ax);
        ax.resize(x.len(), C64::new(0.0, 0.0));
        self.apply(x, &mut ax);
        let half = C64::new(0.5 * tau, 0.0);
        for (u, v) in x.iter_mut().zip(&ax) {
            *u -= v * half;
        }
        ws.ax = ax;
        self.solve_shifted(half, x, ws)
    }
}
