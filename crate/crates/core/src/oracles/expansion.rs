//! Exact algebra on finite superpositions of coherent states tensored with
//! electronic qubits. No Fock truncation is involved: inner products use the
//! closed-form coherent overlap, displacements act exactly on amplitudes and
//! parity projectors split `|γ⟩` into `(|γ⟩ ± |−γ⟩)/2`.

use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use super::coherent_overlap;
use crate::linalg::C64;

/// `coef · |γ_0⟩ ⊗ … ⊗ |e_0 e_1 …⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub coef: C64,
    pub modes: Vec<C64>,
    pub ions: Vec<u8>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct CoherentExpansion {
    pub terms: Vec<Term>,
}

const MERGE_TOL: f64 = 1e-14;

fn cat_norm(alpha: f64, odd: bool) -> f64 {
    let e = (-2.0 * alpha * alpha).exp();
    let sign = if odd { -1.0 } else { 1.0 };
    1.0 / (2.0 + 2.0 * sign * e).sqrt()
}

impl CoherentExpansion {
    /// Single-mode cat `N±(|α⟩ ± |−α⟩)`, no ions.
    pub fn cat(alpha: f64, odd: bool) -> Self {
        let n = cat_norm(alpha, odd);
        let sign = if odd { -1.0 } else { 1.0 };
        CoherentExpansion {
            terms: vec![
                Term {
                    coef: C64::new(n, 0.0),
                    modes: vec![C64::new(alpha, 0.0)],
                    ions: vec![],
                },
                Term {
                    coef: C64::new(sign * n, 0.0),
                    modes: vec![C64::new(-alpha, 0.0)],
                    ions: vec![],
                },
            ],
        }
    }

    /// Electronic basis ket with no modes.
    pub fn ions(bits: &[u8]) -> Self {
        CoherentExpansion {
            terms: vec![Term {
                coef: C64::new(1.0, 0.0),
                modes: vec![],
                ions: bits.to_vec(),
            }],
        }
    }

    pub fn tensor(&self, other: &Self) -> Self {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                let mut modes = a.modes.clone();
                modes.extend_from_slice(&b.modes);
                let mut ions = a.ions.clone();
                ions.extend_from_slice(&b.ions);
                terms.push(Term {
                    coef: a.coef * b.coef,
                    modes,
                    ions,
                });
            }
        }
        CoherentExpansion { terms }
    }

    pub fn scaled(mut self, c: C64) -> Self {
        self.terms.iter_mut().for_each(|t| t.coef *= c);
        self
    }

    pub fn plus(mut self, other: &Self) -> Self {
        self.terms.extend(other.terms.iter().cloned());
        self.merged()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for a in &self.terms {
            for b in &other.terms {
                if a.ions != b.ions {
                    continue;
                }
                let mut v = a.coef.conj() * b.coef;
                for (ga, gb) in a.modes.iter().zip(&b.modes) {
                    v *= coherent_overlap(*ga, *gb);
                }
                acc += v;
            }
        }
        acc
    }

    pub fn norm_sqr(&self) -> f64 {
        self.inner(self).re
    }

    /// Collapses terms with identical amplitudes and ion bits.
    pub fn merged(self) -> Self {
        let mut out: Vec<Term> = Vec::new();
        for t in self.terms {
            if let Some(existing) = out.iter_mut().find(|o| {
                o.ions == t.ions
                    && o.modes
                        .iter()
                        .zip(&t.modes)
                        .all(|(a, b)| (a - b).norm() < MERGE_TOL)
            }) {
                existing.coef += t.coef;
            } else {
                out.push(t);
            }
        }
        out.retain(|t| t.coef.norm() > 1e-300);
        CoherentExpansion { terms: out }
    }

    /// `Π_even ⊗ I + Π_odd ⊗ σ_x` between `mode` and `ion`.
    pub fn parity_controlled_flip(&self, mode: usize, ion: usize) -> Self {
        let half = C64::new(0.5, 0.0);
        let mut terms = Vec::with_capacity(4 * self.terms.len());
        for t in &self.terms {
            let mut neg = t.clone();
            neg.modes[mode] = -neg.modes[mode];
            // even part keeps the ion
            terms.push(Term {
                coef: t.coef * half,
                ..t.clone()
            });
            terms.push(Term {
                coef: t.coef * half,
                ..neg.clone()
            });
            // odd part flips it
            let mut flipped = t.clone();
            flipped.ions[ion] ^= 1;
            let mut flipped_neg = neg.clone();
            flipped_neg.ions[ion] ^= 1;
            terms.push(Term {
                coef: t.coef * half,
                ..flipped
            });
            terms.push(Term {
                coef: -t.coef * half,
                ..flipped_neg
            });
        }
        CoherentExpansion { terms }.merged()
    }

    /// `D(β)` on `mode` when `ion` is excited, using
    /// `D(β)|γ⟩ = e^{i Im(β γ*)} |γ + β⟩`.
    pub fn conditional_displacement(&self, mode: usize, ion: usize, beta: C64) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| {
                if t.ions[ion] == 1 {
                    let g = t.modes[mode];
                    let phase = C64::new(0.0, (beta * g.conj()).im).exp();
                    let mut moved = t.clone();
                    moved.coef *= phase;
                    moved.modes[mode] = g + beta;
                    moved
                } else {
                    t.clone()
                }
            })
            .collect();
        CoherentExpansion { terms }
    }

    /// Multiplies the `|1⟩` component of `ion` by `phase`.
    pub fn excited_phase(&self, ion: usize, phase: C64) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let mut t = t.clone();
                if t.ions[ion] == 1 {
                    t.coef *= phase;
                }
                t
            })
            .collect();
        CoherentExpansion { terms }
    }

    /// Parity-conditioned CNOT, then the displacement CNOT, then the
    /// parity-conditioned CNOT again.
    pub fn swap(&self, mode: usize, ion: usize, epsilon: f64) -> Self {
        let s = self.parity_controlled_flip(mode, ion);
        let s = s
            .excited_phase(ion, C64::new(0.0, -1.0))
            .conditional_displacement(mode, ion, C64::new(0.0, epsilon))
            .merged();
        s.parity_controlled_flip(mode, ion)
    }

    /// Reduced electronic density matrix (row-major, `2^k × 2^k`) for the
    /// listed ions, tracing the modes and the other ions.
    pub fn ion_density(&self, ions: &[usize]) -> Vec<C64> {
        let k = 1usize << ions.len();
        let label = |t: &Term| {
            ions.iter()
                .fold(0usize, |acc, &i| (acc << 1) | t.ions[i] as usize)
        };
        let mut rho = vec![C64::new(0.0, 0.0); k * k];
        for a in &self.terms {
            for b in &self.terms {
                let others_match = a
                    .ions
                    .iter()
                    .zip(&b.ions)
                    .enumerate()
                    .all(|(i, (x, y))| ions.contains(&i) || x == y);
                if !others_match {
                    continue;
                }
                let mut v = a.coef * b.coef.conj();
                for (ga, gb) in a.modes.iter().zip(&b.modes) {
                    v *= coherent_overlap(*gb, *ga);
                }
                rho[label(a) * k + label(b)] += v;
            }
        }
        rho
    }
}

/// Fidelity of the swap applied to `(|0_L⟩ + |1_L⟩)/√2 ⊗ |0⟩_e` with
/// `|0_L⟩ ⊗ (|0⟩ + |1⟩)/√2`, displacement `iε`, evaluated exactly.
pub fn swap_transfer_fidelity(alpha: f64, epsilon: f64) -> f64 {
    let h = C64::new(core::f64::consts::FRAC_1_SQRT_2, 0.0);
    let plus = CoherentExpansion::cat(alpha, false);
    let minus = CoherentExpansion::cat(alpha, true);
    let input = plus
        .clone()
        .scaled(h)
        .plus(&minus.clone().scaled(h))
        .tensor(&CoherentExpansion::ions(&[0]));
    let out = input.swap(0, 0, epsilon);
    let target = plus.tensor(
        &CoherentExpansion::ions(&[0])
            .scaled(h)
            .plus(&CoherentExpansion::ions(&[1]).scaled(h)),
    );
    target.inner(&out).norm_sqr() / (out.norm_sqr() * target.norm_sqr())
}

/// Electronic `|φ⁺⟩` fidelity after swapping a cat Bell state
/// `(|+,+⟩ + |−,−⟩)/√2` into two ions, mode `a` first.
pub fn double_swap_bell_fidelity(alpha: f64, beta: f64, eps_a: f64, eps_b: f64) -> f64 {
    let h = C64::new(core::f64::consts::FRAC_1_SQRT_2, 0.0);
    let pp = CoherentExpansion::cat(alpha, false).tensor(&CoherentExpansion::cat(beta, false));
    let mm = CoherentExpansion::cat(alpha, true).tensor(&CoherentExpansion::cat(beta, true));
    let input = pp
        .scaled(h)
        .plus(&mm.scaled(h))
        .tensor(&CoherentExpansion::ions(&[0, 0]));
    let out = input.swap(0, 0, eps_a).swap(1, 1, eps_b);
    let rho = out.ion_density(&[0, 1]);
    let trace = rho[0].re + rho[5].re + rho[10].re + rho[15].re;
    // ⟨φ⁺|ρ|φ⁺⟩ with φ⁺ = (|00⟩ + |11⟩)/√2
    0.5 * (rho[0] + rho[3] + rho[12] + rho[15]).re / trace
}
