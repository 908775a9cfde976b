use std::collections::HashSet;

use bpreduce::bp::{all_assignments, random_bp, BranchingProgram, Node, RandomBpParams};
use bpreduce::direct::{aligned_satisfying_pairs, reduce_direct, score_tables, GadgetBuilder, Side};
use bpreduce::measures::{k_lcs, lcs, unweighted_lcs, wlcs_symbols};
use num_bigint::BigUint;

fn program(n: usize, width: usize, t: u32, density: f64, seed: u64) -> BranchingProgram {
    random_bp(&RandomBpParams { n, width, t, density }, seed).unwrap()
}

/// Every `(u, v)` with `v` exactly `2^k` layers after `u`.
fn spans(bp: &BranchingProgram, k: usize) -> Vec<(Node, Node)> {
    let mut out = Vec::new();
    for layer in 1..=bp.num_layers() - (1 << k) {
        for ui in 1..=bp.width() {
            for vi in 1..=bp.width() {
                out.push((Node::new(layer, ui), Node::new(layer + (1 << k), vi)));
            }
        }
    }
    out
}

#[test]
fn two_party_dichotomy() {
    for (width, seed) in [(2, 1), (3, 2)] {
        let bp = program(4, width, 2, 0.5, seed);
        let gb = GadgetBuilder::new(&bp).unwrap();
        let weights = gb.alphabet().weights().to_vec();
        let halves = all_assignments(2);
        for k in 1..=2 {
            let y = gb.tables().y[k].clone();
            for (u, v) in spans(&bp, k) {
                for a in &halves {
                    let ga = gb.rg(Side::A, a, u, v, k).unwrap();
                    assert_eq!(BigUint::from(gb.weight(&ga).unwrap()), gb.tables().z[k]);
                    for b in &halves {
                        let gbb = gb.rg(Side::B, b, u, v, k).unwrap();
                        let score = BigUint::from(wlcs_symbols(&ga, &gbb, &weights));
                        let joined: Vec<bool> = a.iter().chain(b).copied().collect();
                        if bp.reachable(&joined, u, v).unwrap() {
                            assert_eq!(score, y);
                        } else {
                            assert!(score < y);
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn three_party_dichotomy() {
    let bp = program(6, 2, 2, 0.55, 7);
    let gb = GadgetBuilder::with_parties(&bp, 3).unwrap();
    let weights = gb.alphabet().weights().to_vec();
    let blocks = all_assignments(2);
    for k in 1..=2 {
        let y = gb.tables().y[k].clone();
        for (u, v) in spans(&bp, k).into_iter().step_by(3) {
            for p1 in &blocks {
                for p2 in &blocks {
                    for p3 in &blocks {
                        let seqs: Vec<Vec<u32>> = [(1, p1), (2, p2), (3, p3)]
                            .iter()
                            .map(|&(party, h)| gb.rg_party(party, h, u, v, k).unwrap())
                            .collect();
                        let refs: Vec<&[u32]> = seqs.iter().map(Vec::as_slice).collect();
                        let score = BigUint::from(k_lcs(&refs, Some(&weights)).unwrap());
                        let joined: Vec<bool> = [p1, p2, p3].into_iter().flatten().copied().collect();
                        assert_eq!(score == y, bp.reachable(&joined, u, v).unwrap());
                        assert!(score <= y);
                    }
                }
            }
        }
    }
}

#[test]
fn two_party_builder_is_the_k2_case() {
    let bp = program(4, 2, 1, 0.5, 3);
    let gb = GadgetBuilder::new(&bp).unwrap();
    let half = vec![true, false];
    let (u, v) = (bp.start(), Node::new(3, 1));
    assert_eq!(gb.rg(Side::A, &half, u, v, 1).unwrap(), gb.rg_party(1, &half, u, v, 1).unwrap());
    assert_eq!(gb.rg(Side::B, &half, u, v, 1).unwrap(), gb.rg_party(2, &half, u, v, 1).unwrap());
    let three = program(6, 2, 1, 0.5, 3);
    assert!(GadgetBuilder::with_parties(&three, 3).unwrap().rg(Side::A, &half, u, v, 1).is_err());
}

#[test]
fn party_letters_are_disjoint() {
    let bp = program(6, 3, 2, 0.5, 4);
    let gb = GadgetBuilder::with_parties(&bp, 3).unwrap();
    let pads: Vec<u32> = gb.pad_letters().collect();
    assert_eq!(pads.len(), 2 * 2);
    assert_eq!(pads.iter().collect::<HashSet<_>>().len(), pads.len());
    let absent: HashSet<u32> = (1..=3).map(|p| gb.absent_letter(p)).collect();
    assert_eq!(absent.len(), 3);
    assert!(pads.iter().all(|p| !absent.contains(p)));
    let blocks = all_assignments(2);
    let (u, v) = (bp.start(), bp.accept());
    for (party, other) in [(1, 2), (2, 1)] {
        for h in &blocks {
            let seq = gb.rg_party(party, h, u, v, 2).unwrap();
            assert!(!seq.contains(&gb.absent_letter(other)));
            assert!(!seq.contains(&gb.absent_letter(3)));
        }
    }
}

#[test]
fn weight_schedule() {
    for width in 2..=6usize {
        let tables = score_tables(width, 4).unwrap();
        let growth = BigUint::from(width * (36 * width + 26));
        for k in 0..=4usize {
            assert_eq!(tables.z[k], growth.pow(k as u32));
            assert!(tables.z[k] <= BigUint::from(width).pow(8 * k as u32));
        }
    }
    assert!(score_tables(1, 2).is_err());
}

#[test]
fn small_reduction_matches_plain_dp() {
    for seed in 0..4 {
        let bp = program(2, 2, 1, 0.6, seed);
        let red = reduce_direct(&bp).unwrap();
        let a = red.a.unweight(u64::MAX).unwrap();
        let b = red.b.unweight(u64::MAX).unwrap();
        assert_eq!(a.len() as u64, red.predicted_a_length());
        assert_eq!(b.len() as u64, red.predicted_b_length());
        let value = lcs(&a, &b) as u64;
        assert_eq!(value, unweighted_lcs(&red.a, &red.b));
        let halves = all_assignments(1);
        let aligned = aligned_satisfying_pairs(&bp, &halves, &halves).unwrap() as u64;
        assert_eq!(value, red.threshold - 1 + aligned);
        assert_eq!(red.accepts(value), bp.brute_force_sat().unwrap().is_some());
    }
}
