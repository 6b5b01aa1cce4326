mod common;

use lpbridge::corpus;
use lpbridge::rng;
use lpbridge::tanner::{
    check_expansion, construct, girth, neighborhood_size, read_alist, write_alist, ConstructionKind, ConstructionSpec,
    Girth, TannerGraph,
};
use lpbridge::Gf2Vector;
use rand::Rng;

fn oracle(h: &lpbridge::Gf2Matrix) -> Girth {
    common::trace_girth(h, 2 * (h.rows() + h.cols())).map_or(Girth::Infinite, Girth::Finite)
}

#[test]
fn bfs_girth_matches_trace_oracle_on_small_matrices() {
    for (name, h) in corpus::small_corpus() {
        assert_eq!(girth(&TannerGraph::from_matrix(&h)), oracle(&h), "{name}");
    }
    let mut r = rng::rng(11);
    for _ in 0..60 {
        let m = r.gen_range(2..=6);
        let n = r.gen_range(3..=16);
        let h = common::random_zero_one(m, n, &mut r);
        assert_eq!(girth(&TannerGraph::from_matrix(&h)), oracle(&h), "{h:?}");
    }
}

#[test]
fn constructions_respect_weights() {
    for seed in 0..5 {
        let h = construct(&ConstructionSpec::new(ConstructionKind::GallagerRegular, 3, 6, 48, seed))
            .unwrap()
            .into_binary()
            .unwrap();
        assert!((0..h.cols()).all(|c| h.col_weight(c) == 3));
        assert!((0..h.rows()).all(|r| h.row_weight(r) == 6));
    }
}

#[test]
fn alist_round_trip_on_random_matrices() {
    let mut r = rng::rng(5);
    for _ in 0..100 {
        let m = r.gen_range(1..=8);
        let n = r.gen_range(2..=20);
        let h = common::random_zero_one(m, n, &mut r);
        let mut buf = Vec::new();
        write_alist(&h, &mut buf).unwrap();
        assert_eq!(read_alist(buf.as_slice()).unwrap(), h);
    }
}

#[test]
fn expansion_witness_reproduces_failure() {
    let h = construct(&ConstructionSpec::new(ConstructionKind::GallagerRegular, 3, 6, 24, 2)).unwrap().into_binary().unwrap();
    let g = TannerGraph::from_matrix(&h);
    let rep = check_expansion(&g, 0.25, 0.9, 1 << 20).unwrap();
    let w = rep.witness.expect("delta = 0.9 is too strong for a (3,6) code");
    assert!((neighborhood_size(&g, &w) as f64) < 0.9 * 3.0 * w.len() as f64);
}

#[test]
fn nullspace_and_codewords_agree() {
    let mut r = rng::rng(8);
    for _ in 0..40 {
        let m = r.gen_range(1..=10);
        let n = r.gen_range(2..=16);
        let h = common::random_zero_one(m, n, &mut r);
        let basis = h.nullspace_basis();
        assert_eq!(h.rank() + basis.len(), n);
        assert!(basis.iter().all(|b| h.is_codeword(b)));
        let words = h.enumerate_codewords(1 << 16).unwrap();
        assert_eq!(words.len(), 1 << basis.len());
        let set: std::collections::HashSet<Vec<u8>> = words.iter().map(Gf2Vector::to_bits).collect();
        for a in &words {
            for b in words.iter().take(8) {
                assert!(set.contains(&a.xor(b).to_bits()));
            }
        }
    }
}
