//! Lab-frame master equation for a TLS coupled to one truncated vibrational
//! mode.
//!
//! Basis index `s·(N+1) + n` with `s = 0` ground, `s = 1` excited and
//! `n = 0..=N` vibrational quanta. Operators are stored as row-major dense
//! `D × D` buffers; the generator itself only touches nonzero entries.

use num_complex::Complex64;

use ramanpump_core::{DriveParams, MoleculeParams};

use crate::integrator::OdeSystem;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Real sparse operator, `(row, col, value)` triplets.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseOp {
    pub entries: Vec<(usize, usize, f64)>,
}

impl SparseOp {
    fn from_fn(dim: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut entries = Vec::new();
        for r in 0..dim {
            for c in 0..dim {
                let v = f(r, c);
                if v != 0.0 {
                    entries.push((r, c, v));
                }
            }
        }
        SparseOp { entries }
    }

    pub fn adjoint(&self) -> SparseOp {
        SparseOp {
            entries: self.entries.iter().map(|&(r, c, v)| (c, r, v)).collect(),
        }
    }

    fn scaled(&self, k: f64) -> SparseOp {
        SparseOp {
            entries: self.entries.iter().map(|&(r, c, v)| (r, c, v * k)).collect(),
        }
    }

    /// `Tr(O X)` for a row-major `dim × dim` buffer.
    pub fn expect(&self, x: &[Complex64], dim: usize) -> Complex64 {
        self.entries.iter().map(|&(r, c, v)| x[c * dim + r] * v).sum()
    }

    /// Dense `A · B` for two sparse operators; used only at setup.
    fn product(&self, other: &SparseOp, dim: usize) -> Vec<f64> {
        let mut out = vec![0.0; dim * dim];
        for &(r, k, v) in &self.entries {
            for &(k2, c, w) in &other.entries {
                if k == k2 {
                    out[r * dim + c] += v * w;
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Basis {
    pub fock_cutoff: usize,
}

impl Basis {
    pub fn dim(&self) -> usize {
        2 * (self.fock_cutoff + 1)
    }

    pub fn index(&self, excited: bool, n: usize) -> usize {
        usize::from(excited) * (self.fock_cutoff + 1) + n
    }

    fn split(&self, i: usize) -> (usize, usize) {
        (i / (self.fock_cutoff + 1), i % (self.fock_cutoff + 1))
    }

    /// TLS lowering operator σ = |g⟩⟨e|.
    pub fn sigma(&self) -> SparseOp {
        SparseOp::from_fn(self.dim(), |r, c| {
            let ((sr, nr), (sc, nc)) = (self.split(r), self.split(c));
            if sr == 0 && sc == 1 && nr == nc {
                1.0
            } else {
                0.0
            }
        })
    }

    /// Vibrational annihilation operator.
    pub fn b(&self) -> SparseOp {
        SparseOp::from_fn(self.dim(), |r, c| {
            let ((sr, nr), (sc, nc)) = (self.split(r), self.split(c));
            if sr == sc && nc == nr + 1 {
                (nc as f64).sqrt()
            } else {
                0.0
            }
        })
    }

    pub fn number(&self) -> SparseOp {
        SparseOp::from_fn(self.dim(), |r, c| if r == c { self.split(r).1 as f64 } else { 0.0 })
    }

    pub fn excited_projector(&self) -> SparseOp {
        SparseOp::from_fn(self.dim(), |r, c| if r == c && self.split(r).0 == 1 { 1.0 } else { 0.0 })
    }

    /// Projector on the highest retained Fock level.
    pub fn top_projector(&self) -> SparseOp {
        SparseOp::from_fn(self.dim(), |r, c| {
            if r == c && self.split(r).1 == self.fock_cutoff {
                1.0
            } else {
                0.0
            }
        })
    }

    /// `|g⟩⟨g| ⊗ ρ_th(n̄)`, renormalized on the truncated space.
    pub fn ground_thermal_state(&self, n_bar: f64) -> Vec<Complex64> {
        let d = self.dim();
        let r = if n_bar > 0.0 { n_bar / (1.0 + n_bar) } else { 0.0 };
        let weights: Vec<f64> = (0..=self.fock_cutoff).map(|n| r.powi(n as i32)).collect();
        let z: f64 = weights.iter().sum();
        let mut rho = vec![Complex64::new(0.0, 0.0); d * d];
        for (n, w) in weights.iter().enumerate() {
            let i = self.index(false, n);
            rho[i * d + i] = Complex64::new(w / z, 0.0);
        }
        rho
    }
}

/// Generator `X ↦ −i[H(t), X] + Σ_k (L_k X L_k† − ½{L_k†L_k, X})` with
///
/// `H(t) = ω₀σ†σ + ω_v b†b + gσ†σ(b + b†) + (σ + σ†)(Ω_vis cos ω_vis t + Ω_IR cos ω_IR t)`
///
/// and jump operators `√(2γ⊥) σ`, `√(2γ_v(1+n̄)) b`, `√(2γ_v n̄) b†`. It acts
/// on any operator, so it also propagates the `σρ` of the regression theorem.
pub struct MasterEquation {
    dim: usize,
    /// `−i(h_i − h_j) − (m_i + m_j)/2` for the diagonal parts of H and ΣL†L.
    diagonal: Vec<Complex64>,
    coupling: SparseOp,
    dipole: SparseOp,
    jumps: Vec<SparseOp>,
    drive: DriveParams,
}

impl MasterEquation {
    pub fn new(basis: Basis, mol: &MoleculeParams, drive: &DriveParams, n_bar: f64) -> Self {
        let dim = basis.dim();
        let sigma = basis.sigma();
        let b = basis.b();
        let pe = basis.excited_projector();
        let num = basis.number();

        let mut h_diag = vec![0.0; dim];
        for &(r, _, v) in &pe.entries {
            h_diag[r] += mol.omega0 * v;
        }
        for &(r, _, v) in &num.entries {
            h_diag[r] += mol.omega_v * v;
        }
        // gσ†σ(b + b†): b and b† both act within the excited manifold here
        let mut coupling = Vec::new();
        for &(r, c, v) in &b.entries {
            if basis.split(r).0 == 1 {
                coupling.push((r, c, mol.g * v));
                coupling.push((c, r, mol.g * v));
            }
        }
        let dipole = SparseOp {
            entries: sigma
                .entries
                .iter()
                .flat_map(|&(r, c, v)| [(r, c, v), (c, r, v)])
                .collect(),
        };

        let mut jumps = vec![sigma.scaled((2.0 * mol.gamma_perp).sqrt())];
        jumps.push(b.scaled((2.0 * mol.gamma_v * (1.0 + n_bar)).sqrt()));
        if n_bar > 0.0 {
            jumps.push(b.adjoint().scaled((2.0 * mol.gamma_v * n_bar).sqrt()));
        }
        jumps.retain(|l| !l.entries.is_empty() && l.entries.iter().any(|e| e.2 != 0.0));

        let mut m_diag = vec![0.0; dim];
        for l in &jumps {
            let m = l.adjoint().product(l, dim);
            for r in 0..dim {
                for c in 0..dim {
                    if r == c {
                        m_diag[r] += m[r * dim + c];
                    } else {
                        debug_assert!(m[r * dim + c] == 0.0, "L†L not diagonal");
                    }
                }
            }
        }

        let mut diagonal = vec![Complex64::new(0.0, 0.0); dim * dim];
        for r in 0..dim {
            for c in 0..dim {
                diagonal[r * dim + c] =
                    -I * (h_diag[r] - h_diag[c]) - 0.5 * (m_diag[r] + m_diag[c]);
            }
        }

        MasterEquation {
            dim,
            diagonal,
            coupling: SparseOp { entries: coupling },
            dipole,
            jumps,
            drive: *drive,
        }
    }

    pub fn drive_field(&self, t: f64) -> f64 {
        self.drive.rabi_vis * (self.drive.omega_vis * t).cos()
            + self.drive.rabi_ir * (self.drive.omega_ir * t).cos()
    }
}

/// Adds `−i(A X − X A)` for a real symmetric sparse `A` scaled by `k`.
#[inline]
fn commutator(out: &mut [Complex64], x: &[Complex64], a: &SparseOp, k: f64, d: usize) {
    for &(r, c, v) in &a.entries {
        let w = -I * (v * k);
        // (A X)[r][:] += v X[c][:]
        let (src, dst) = (c * d, r * d);
        for j in 0..d {
            out[dst + j] += w * x[src + j];
        }
        // (X A)[:][c] += X[:][r] v
        for i in 0..d {
            out[i * d + c] -= w * x[i * d + r];
        }
    }
}

impl OdeSystem for MasterEquation {
    fn dim(&self) -> usize {
        self.dim * self.dim
    }

    fn rhs(&self, t: f64, x: &[Complex64], out: &mut [Complex64]) {
        let d = self.dim;
        for ((o, k), v) in out.iter_mut().zip(&self.diagonal).zip(x) {
            *o = k * v;
        }
        commutator(out, x, &self.coupling, 1.0, d);
        let f = self.drive_field(t);
        if f != 0.0 {
            commutator(out, x, &self.dipole, f, d);
        }
        for l in &self.jumps {
            for &(i, k, v) in &l.entries {
                for &(j, m, w) in &l.entries {
                    out[i * d + j] += x[k * d + m] * (v * w);
                }
            }
        }
    }
}
