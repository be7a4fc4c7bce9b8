use bowling::braid::{specht_element, BraidWord, Permutation};
use bowling::cabled::{check_cabled_formula, crossing_oracle, rho_cabled_matrix, FallDistribution};
use bowling::matrix::PolyMatrix;
use bowling::multiball::{apply_generator, rho_matrix, BallState};
use bowling::qpoly::{falling_probability, gauss_binom, QPoly, QScalar};
use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn word_strategy(max_strands: usize, max_len: usize) -> impl Strategy<Value = BraidWord> {
    (2..=max_strands).prop_flat_map(move |n| {
        prop::collection::vec(1..n, 0..=max_len)
            .prop_map(move |letters| BraidWord::new(n, letters).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn columns_are_distributions(w in word_strategy(4, 8), cap in 1u32..=3) {
        let m = rho_matrix(&w, cap).unwrap();
        prop_assert_eq!(m.column_sum_violation(), None);
        prop_assert_eq!(m.conservation_violation(), None);
    }

    #[test]
    fn cabled_columns_are_distributions(w in word_strategy(3, 6), cable in 1u32..=3) {
        let m = rho_cabled_matrix(&w, cable).unwrap();
        prop_assert_eq!(m.column_sum_violation(), None);
        prop_assert_eq!(m.conservation_violation(), None);
    }

    #[test]
    fn concatenation_is_matrix_product(
        w in word_strategy(4, 8),
        cut in 0usize..=8,
        cap in 1u32..=2,
    ) {
        let n = w.strands();
        let cut = cut.min(w.len());
        let first = BraidWord::new(n, w.letters()[..cut].to_vec()).unwrap();
        let second = BraidWord::new(n, w.letters()[cut..].to_vec()).unwrap();
        let whole = rho_matrix(&w, cap).unwrap();
        let product = rho_matrix(&second, cap).unwrap().matrix().mul(rho_matrix(&first, cap).unwrap().matrix());
        prop_assert_eq!(whole.matrix(), &product);

        let pu = first.permutation();
        let pv = second.permutation();
        prop_assert_eq!(first.concat(&second).unwrap().permutation(), pv.compose(&pu));
    }

    #[test]
    fn one_ball_block_matches_burau_product(w in word_strategy(4, 8), cap in 1u32..=3) {
        let n = w.strands();
        let burau = burau_matrix(&w);
        let m = rho_matrix(&w, cap).unwrap();
        for i in 0..n {
            for j in 0..n {
                let mut u = vec![0; n];
                u[i] = 1;
                let mut v = vec![0; n];
                v[j] = 1;
                prop_assert_eq!(m.entry(&v, &u).unwrap(), burau[j][i].clone());
            }
        }
    }
}

/// Dense non-reduced Burau matrices with `t = 1 - q`: column `i` of a single
/// crossing `σ_i` sends the ball on to `i + 1` with weight `q` and keeps it at
/// `i` with weight `1 - q`; column `i + 1` moves it to `i`.
fn burau_matrix(w: &BraidWord) -> Vec<Vec<QPoly>> {
    let n = w.strands();
    let identity = |n: usize| -> Vec<Vec<QPoly>> {
        (0..n)
            .map(|r| {
                (0..n)
                    .map(|c| if r == c { QPoly::one() } else { QPoly::zero() })
                    .collect()
            })
            .collect()
    };
    let mut acc = identity(n);
    for &i in w.letters() {
        let mut g = identity(n);
        let (a, b) = (i - 1, i);
        g[a][a] = QPoly::one_minus_q();
        g[b][a] = QPoly::q();
        g[a][b] = QPoly::one();
        g[b][b] = QPoly::zero();
        acc = (0..n)
            .map(|r| {
                (0..n)
                    .map(|c| (0..n).map(|k| &g[r][k] * &acc[k][c]).sum())
                    .collect()
            })
            .collect();
    }
    acc
}

#[test]
fn generator_one_ball_block_eigenvalues() {
    // char poly of [[1-q, 1], [q, 0]] is λ² - (1-q)λ - q = (λ - 1)(λ + q)
    let m = rho_matrix(&BraidWord::parse("1", 2).unwrap(), 2).unwrap();
    let a = m.entry(&[1, 0], &[1, 0]).unwrap();
    let b = m.entry(&[1, 0], &[0, 1]).unwrap();
    let c = m.entry(&[0, 1], &[1, 0]).unwrap();
    let d = m.entry(&[0, 1], &[0, 1]).unwrap();
    let trace = &a + &d;
    let det = &a * &d - &b * &c;
    assert_eq!(trace, QPoly::one_minus_q());
    assert_eq!(det, -QPoly::q());
}

#[test]
fn minimal_braids_are_reduced() {
    for n in 1..=5usize {
        for images in (1..=n).permutations(n) {
            let w = Permutation::new(images).unwrap();
            let beta = w.minimal_braid();
            assert_eq!(beta.len(), w.inversions(), "{w}");
            assert_eq!(beta.permutation(), w, "{w}");
            assert_eq!(w.sign(), if beta.len().is_multiple_of(2) { 1 } else { -1 });
        }
    }
}

#[test]
fn specht_elements_are_signed_sums() {
    for (n, cap, k) in [
        (3, 1, 1),
        (4, 1, 1),
        (4, 1, 2),
        (4, 2, 1),
        (5, 2, 2),
        (5, 3, 1),
    ] {
        let x = specht_element(n, cap, k).unwrap();
        let width = cap as usize + 2;
        let factorial: usize = (1..=width).product();
        assert_eq!(x.num_terms(), factorial);
        let mut total = BigInt::zero();
        for (_, c) in x.terms() {
            assert!(c.is_constant());
            let v = c.coeff(0);
            assert!(v == BigInt::one() || v == -BigInt::one());
            total += v;
        }
        assert!(total.is_zero());
    }
}

#[test]
fn monotone_states_have_a_fixing_generator() {
    for cap in 1..=3u32 {
        let n = cap as usize + 2;
        for counts in (0..=cap).combinations_with_replacement(n) {
            let u = BallState::new(counts.clone(), cap).unwrap();
            let fixed =
                (1..n).any(|i| apply_generator(i, &u).unwrap() == vec![(u.clone(), QPoly::one())]);
            assert!(fixed, "{counts:?}");
        }
    }
}

#[test]
fn gaussian_binomial_symmetry() {
    for k in 0..=8u32 {
        for r in 0..=k {
            assert_eq!(gauss_binom(k, r as i64), gauss_binom(k, (k - r) as i64));
        }
    }
}

#[test]
fn falling_probabilities_normalize() {
    for cable in 1..=5u32 {
        for a in 0..=cable {
            for b in 0..=cable {
                let total: QPoly = (0..=cable)
                    .map(|c| falling_probability(cable, a, b, c).unwrap())
                    .sum();
                assert!(total.is_one(), "K={cable} a={a} b={b}");
            }
        }
    }
    for cable in 1..=3u32 {
        for a in 0..=cable {
            for b in 0..=cable {
                assert!(crossing_oracle(cable, a, b).unwrap().total().is_one());
            }
        }
    }
}

#[test]
fn falling_probability_specializations() {
    let (one, zero) = (QScalar::one(), QScalar::zero());
    for cable in 1..=5u32 {
        for a in 0..=cable {
            for b in 0..=cable {
                for c in 0..=cable {
                    let p = falling_probability(cable, a, b, c).unwrap();
                    let at_one = if c == 0 { one.clone() } else { zero.clone() };
                    assert_eq!(p.eval(&one), at_one);
                    let at_zero = if c == a.min(cable - b) {
                        one.clone()
                    } else {
                        zero.clone()
                    };
                    assert_eq!(p.eval(&zero), at_zero, "K={cable} a={a} b={b} c={c}");
                }
            }
        }
    }
}

#[test]
fn degenerate_widths() {
    for cable in 1..=4u32 {
        for b in 0..=cable {
            let d = FallDistribution::from_formula(cable, 0, b).unwrap();
            assert_eq!(d.dist.len(), 1);
            assert!(d.get(0).is_one());
        }
        for a in 0..=cable {
            let d = FallDistribution::from_formula(cable, a, cable).unwrap();
            assert_eq!(d.dist.len(), 1);
            assert!(d.get(0).is_one());
            for c in 1..=cable {
                assert!(falling_probability(cable, a, cable, c).unwrap().is_zero());
            }
        }
    }
}

#[test]
fn oracle_matches_formula_spot_checks_at_width_four() {
    for (a, b) in [(4, 0), (3, 1), (2, 2), (4, 3), (1, 0)] {
        let oracle = crossing_oracle(4, a, b).unwrap();
        let formula = FallDistribution::from_formula(4, a, b).unwrap();
        assert_eq!(oracle, formula, "a={a} b={b}");
    }
    assert!(check_cabled_formula(4).unwrap().passed);
}

#[test]
fn cabled_matrix_examples() {
    let left = rho_cabled_matrix(&BraidWord::parse("1 2 1", 3).unwrap(), 2).unwrap();
    let right = rho_cabled_matrix(&BraidWord::parse("2 1 2", 3).unwrap(), 2).unwrap();
    assert_eq!(left, right);
    let id = rho_cabled_matrix(&BraidWord::parse("", 2).unwrap(), 3).unwrap();
    assert_eq!(id.dim(), 16);
    assert_eq!(*id.matrix(), PolyMatrix::identity(16));
}

#[test]
fn cabled_reversal_at_q_one() {
    let m = rho_cabled_matrix(&BraidWord::parse("1 2 1", 3).unwrap(), 2).unwrap();
    let at_one = m.matrix().eval(&QScalar::one());
    let space = m.space();
    for (col, u) in space.states().enumerate() {
        let reversed: Vec<u32> = u.iter().rev().copied().collect();
        assert_eq!(at_one.column(col).len(), 1);
        assert!(at_one.get(space.index(&reversed).unwrap(), col).is_one());
    }
}
