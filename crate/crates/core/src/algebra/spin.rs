//! Irreducible matrix representation of the Clifford algebra with
//! `c_j^2 = -1`, and the chirality operator reproducing the supertrace.

use super::element::CliffordElement;
use super::matrix::Mat;
use super::word;
use crate::scalar::Scalar;

fn pauli<S: Scalar>(k: usize) -> Mat<S> {
    let (z, o, i) = (S::zero(), S::one(), S::imag_unit());
    let rows = match k {
        0 => vec![vec![o.clone(), z.clone()], vec![z.clone(), o.clone()]],
        1 => vec![vec![z.clone(), o.clone()], vec![o.clone(), z.clone()]],
        2 => vec![vec![z.clone(), -i.clone()], vec![i.clone(), z.clone()]],
        3 => vec![vec![o.clone(), z.clone()], vec![z.clone(), -o.clone()]],
        _ => unreachable!(),
    };
    Mat::from_rows(rows).unwrap()
}

fn kron_chain<S: Scalar>(factors: &[Mat<S>]) -> Mat<S> {
    factors
        .iter()
        .fold(Mat::identity(1), |acc, f| acc.kron(f))
}

pub fn spinor_dim(n: usize) -> usize {
    1 << (n / 2)
}

/// Hermitian generators `γ_1 … γ_n` with `γ_j γ_k + γ_k γ_j = 2 δ_jk`.
fn hermitian_gammas<S: Scalar>(n: usize) -> Vec<Mat<S>> {
    let m = n / 2;
    let mut out = Vec::with_capacity(n);
    for k in 0..m {
        for sigma in [1, 2] {
            let mut f = Vec::with_capacity(m);
            for slot in 0..m {
                f.push(match slot.cmp(&k) {
                    std::cmp::Ordering::Less => pauli(3),
                    std::cmp::Ordering::Equal => pauli(sigma),
                    std::cmp::Ordering::Greater => pauli(0),
                });
            }
            out.push(kron_chain(&f));
        }
    }
    if n % 2 == 1 {
        let z = vec![pauli::<S>(3); m];
        out.push(kron_chain(&z));
    }
    out
}

/// Matrices `ρ(c^1) … ρ(c^n)`, each squaring to `-1`.
pub fn generators<S: Scalar>(n: usize) -> Vec<Mat<S>> {
    hermitian_gammas::<S>(n)
        .into_iter()
        .map(|g| g.scale(&S::imag_unit()))
        .collect()
}

/// `Γ = i^{n/2} c^1 … c^n` for even `n`, so that `tr(Γ ρ(c^1…c^n)) = (-2i)^{n/2}`.
pub fn chirality<S: Scalar>(n: usize) -> Mat<S> {
    assert!(n.is_multiple_of(2), "chirality needs even n");
    let prod = generators::<S>(n)
        .iter()
        .fold(Mat::identity(spinor_dim(n)), |acc, c| acc.matmul(c));
    prod.scale(&S::imag_unit().pow((n / 2) as u32))
}

/// `ρ(a) = Σ ρ(c^J) ⊗ a_J`.
pub fn represent<S: Scalar>(a: &CliffordElement<S>) -> Mat<S> {
    let n = a.dim();
    let gens = generators::<S>(n);
    let mut out = Mat::zeros(spinor_dim(n) * a.twist());
    for (w, coeff) in a.terms() {
        let rho = word::axes(*w)
            .iter()
            .fold(Mat::identity(spinor_dim(n)), |acc, &i| acc.matmul(&gens[i - 1]));
        out = out + rho.kron(coeff);
    }
    out
}

/// Supertrace through the representation: `tr((Γ ⊗ 1) ρ(a))`.
pub fn matrix_supertrace<S: Scalar>(a: &CliffordElement<S>) -> S {
    let gamma = chirality::<S>(a.dim()).kron(&Mat::identity(a.twist()));
    gamma.matmul(&represent(a)).trace()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, ExactComplex};

    type E = ExactComplex;

    #[test]
    fn generators_satisfy_relation() {
        for n in 1..=5 {
            let g = generators::<E>(n);
            let d = spinor_dim(n);
            for i in 0..n {
                for j in 0..n {
                    let ac = g[i].matmul(&g[j]) + g[j].matmul(&g[i]);
                    let want = if i == j {
                        Mat::scalar(d, q(-2, 1))
                    } else {
                        Mat::zeros(d)
                    };
                    assert_eq!(ac, want, "n={n} i={i} j={j}");
                }
            }
        }
    }

    #[test]
    fn chirality_squares_to_one_and_anticommutes() {
        for n in [2, 4, 6] {
            let gamma = chirality::<E>(n);
            assert_eq!(gamma.matmul(&gamma), Mat::identity(spinor_dim(n)));
            for c in generators::<E>(n) {
                assert!((gamma.matmul(&c) + c.matmul(&gamma)).is_zero());
            }
        }
    }
}
