use proptest::prelude::*;

use super::*;
use crate::scalar::{q, qc, ExactComplex};

type E = ExactComplex;

fn arb_element(n: usize, twist: usize) -> impl Strategy<Value = CliffordElement<E>> {
    let term = (
        0u32..(1 << n),
        prop::collection::vec((-3i64..4, -3i64..4), twist * twist),
    );
    prop::collection::vec(term, 0..5).prop_map(move |ts| {
        CliffordElement::from_terms(
            n,
            twist,
            ts.into_iter().map(|(w, entries)| {
                let m = Mat::from_fn(twist, |i, j| {
                    let (re, im) = entries[i * twist + j];
                    qc((re, 1), (im, 2))
                });
                (w, m)
            }),
        )
    })
}

fn arb_triple() -> impl Strategy<Value = (CliffordElement<E>, CliffordElement<E>, CliffordElement<E>)> {
    (1usize..=5, 1usize..=2).prop_flat_map(|(n, t)| (arb_element(n, t), arb_element(n, t), arb_element(n, t)))
}

fn arb_even_pair() -> impl Strategy<Value = (CliffordElement<E>, CliffordElement<E>)> {
    prop_oneof![Just(2usize), Just(4usize)]
        .prop_flat_map(|n| (1usize..=2).prop_flat_map(move |t| (arb_element(n, t), arb_element(n, t))))
}

#[test]
fn anticommutator_relation() {
    for n in 1..=6 {
        for i in 1..=n {
            for j in 1..=n {
                let ci = CliffordElement::<E>::generator(n, 1, i);
                let cj = CliffordElement::<E>::generator(n, 1, j);
                let ac = &(&ci * &cj) + &(&cj * &ci);
                let want = if i == j {
                    CliffordElement::scalar(n, 1, q(-2, 1))
                } else {
                    CliffordElement::zero(n, 1)
                };
                assert_eq!(ac, want);
            }
        }
    }
}

#[test]
fn supertrace_of_full_word_with_twist_matches_representation() {
    let a = Mat::from_rows(vec![vec![q(2, 1), qc((1, 3), (1, 1))], vec![q(0, 1), q(-5, 2)]]).unwrap();
    let el = CliffordElement::from_word(4, a.clone(), word::full(4));
    let want = a.trace() * q(-4, 1);
    assert_eq!(el.supertrace().unwrap(), want);
    assert_eq!(spin::matrix_supertrace(&el), want);
}

#[test]
fn supertrace_identities_on_every_word() {
    for n in [2usize, 4, 6] {
        let minus_two_i = qc((0, 1), (-2, 1));
        for w in 0..(1u32 << n) {
            let el = CliffordElement::<E>::basis(n, 1, w);
            let want = if w == word::full(n) {
                (0..n / 2).fold(q(1, 1), |acc, _| acc * minus_two_i.clone())
            } else {
                q(0, 1)
            };
            assert_eq!(el.supertrace().unwrap(), want, "n={n} word={w:b}");
            assert_eq!(spin::matrix_supertrace(&el), want, "n={n} word={w:b}");
        }
    }
}

#[test]
fn symbol_is_multiplicative_up_to_lower_words() {
    for n in 1..=4 {
        for a in 0..(1u32 << n) {
            for b in 0..(1u32 << n) {
                let ca = CliffordElement::<E>::basis(n, 1, a);
                let cb = CliffordElement::<E>::basis(n, 1, b);
                let lhs = exterior_symbol(&(&ca * &cb));
                let rhs = &exterior_symbol(&ca) * &exterior_symbol(&cb);
                let diff = &lhs - &rhs;
                if let Some(len) = diff.max_word_len() {
                    assert!(len < word::len(a) + word::len(b), "n={n} a={a:b} b={b:b}");
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn product_is_associative((a, b, c) in arb_triple()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
    }

    #[test]
    fn supertrace_kills_supercommutators((a, b) in arb_even_pair()) {
        prop_assert_eq!(a.supercommutator(&b).supertrace().unwrap(), q(0, 1));
    }

    #[test]
    fn representation_is_multiplicative((a, b, _) in arb_triple().prop_filter("n ≤ 4", |(a, _, _)| a.dim() <= 4)) {
        let lhs = spin::represent(&(&a * &b));
        let rhs = spin::represent(&a).matmul(&spin::represent(&b));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn representation_is_faithful_in_even_dimension((a, _) in arb_even_pair()) {
        prop_assume!(!a.is_zero());
        prop_assert!(!spin::represent(&a).is_zero());
    }
}
