mod common;

use lpbridge::cslpd::{cs_lpd, cs_opt_bruteforce, norm1, MeasurementInstance};
use lpbridge::nsp::{check_nsp_k, check_nsp_set, random_sparse, subsets, thm2_equivalence};
use lpbridge::{corpus, rng};
use num_rational::BigRational;
use num_traits::Zero;

fn q(v: i64) -> BigRational {
    BigRational::from_integer(v.into())
}

#[test]
fn set_margins_match_circuit_oracle() {
    let mut r = rng::rng(31);
    let mut mats: Vec<Vec<Vec<f64>>> = corpus::small_corpus().into_iter().filter(|(_, h)| h.cols() <= 10).map(|(_, h)| h.to_real_rows()).collect();
    for _ in 0..6 {
        mats.push(common::random_zero_one(3, 7, &mut r).to_real_rows());
    }
    for h in &mats {
        let circuits = common::circuits(h);
        let n = h[0].len();
        for (c, cf) in [(q(1), 1.0), (q(2), 2.0)] {
            for k in 1..=2.min(n) {
                for s in subsets(n, k) {
                    let got = check_nsp_set(h, &s, cf, true).unwrap();
                    let want = common::circuit_set_margin(&circuits, &s, &c);
                    match (got.worst_case, want) {
                        (None, None) => {}
                        (Some(w), Some(m)) => assert_eq!(w.margin, m, "{h:?} S={s:?} C={cf}"),
                        (g, w) => panic!("{h:?} S={s:?}: {g:?} vs {w:?}"),
                    }
                    let expect_holds = common::circuit_set_margin(&circuits, &s, &c).is_none_or(|m| m < BigRational::zero());
                    assert_eq!(got.holds, expect_holds);
                }
            }
        }
    }
}

#[test]
fn nsp_is_monotone() {
    for (name, h) in corpus::small_corpus() {
        let h = h.to_real_rows();
        let n = h[0].len();
        for k in 1..=3.min(n) {
            for &c in &[1.0, 1.5, 2.0] {
                if check_nsp_k(&h, k, c, false).unwrap().holds {
                    assert!(check_nsp_k(&h, k - 1, c, false).unwrap().holds || k == 1, "{name}");
                    assert!(check_nsp_k(&h, k, 1.0, false).unwrap().holds, "{name}");
                }
            }
        }
    }
}

#[test]
fn certified_orders_recover_exactly() {
    for (name, h) in corpus::small_corpus() {
        let h = h.to_real_rows();
        for k in 1..=2 {
            match thm2_equivalence(&h, k, 50, 7) {
                Ok(audit) => assert!(audit.all_pass(), "{name} k={k}: {audit:?}"),
                Err(lpbridge::Error::NotCertified(_)) => {}
                Err(e) => panic!("{name}: {e}"),
            }
        }
    }
}

#[test]
fn relaxation_ordering() {
    let mut r = rng::rng(41);
    for (_, h) in corpus::small_corpus() {
        for k in 1..=2 {
            let inst = MeasurementInstance::from_gf2(&h, random_sparse(h.cols(), k, &mut r)).unwrap();
            let lpd = cs_lpd(&inst).unwrap();
            let (opt, size) = cs_opt_bruteforce(&inst, k).unwrap();
            assert!(lpd.l1_value <= norm1(&opt) + 1e-9);
            if lpd.exact {
                assert!(size <= lpd.e_hat.iter().filter(|v| v.abs() > 1e-9).count());
            }
        }
    }
}
