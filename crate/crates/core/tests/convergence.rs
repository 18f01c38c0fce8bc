use minsum_lbp::convergence::{
    compatible_tuples, replay_proof, sweep_lemmas, verify_bc_lemma, verify_fc_lemma,
    LemmaSweepOptions,
};
use minsum_lbp::grid::enumerate_one_run_boundaries;
use minsum_lbp::{BoundaryConfig, Grid, GridTrace, SymmetryTransform};
use rayon::prelude::*;

#[test]
fn lemmas_hold_from_later_start_times() {
    for n in 1..=3 {
        let grid = Grid::new(n).unwrap();
        let opts = LemmaSweepOptions {
            max_n0: 2 * n,
            ..LemmaSweepOptions::default()
        };
        let bad: Vec<String> = enumerate_one_run_boundaries(&grid, true)
            .par_iter()
            .filter_map(|x| {
                let s = sweep_lemmas(x, &opts).unwrap();
                s.failures
                    .first()
                    .map(|f| format!("{x}: {} n0={}", f.lemma, f.n0))
            })
            .collect();
        assert!(bad.is_empty(), "{bad:?}");
    }
}

#[test]
fn case_analysis_replays_on_every_boundary() {
    for n in 1..=5 {
        let grid = Grid::new(n).unwrap();
        let bad: Vec<String> = enumerate_one_run_boundaries(&grid, false)
            .par_iter()
            .filter_map(|x| {
                let r = replay_proof(x).unwrap();
                (!r.holds()).then(|| {
                    format!(
                        "{x}: conflicts {:?} undetermined {:?}",
                        r.conflicts, r.undetermined
                    )
                })
            })
            .collect();
        assert!(bad.is_empty(), "{bad:?}");
    }
}

#[test]
fn replay_rejects_non_one_run() {
    let x = BoundaryConfig::parse("B2:+-+---------").unwrap();
    assert!(replay_proof(&x).is_err());
}

#[test]
fn lemma_counts_are_orbit_invariant() {
    let grid = Grid::new(3).unwrap();
    for x in enumerate_one_run_boundaries(&grid, true).iter().step_by(3) {
        let base = sweep_lemmas(x, &LemmaSweepOptions::default())
            .unwrap()
            .counts;
        for t in SymmetryTransform::geometric() {
            let counts = sweep_lemmas(&t.apply_boundary(x), &LemmaSweepOptions::default())
                .unwrap()
                .counts;
            assert_eq!(counts, base, "{x} under {t:?}");
        }
    }
}

#[test]
fn forward_hypotheses_transform_with_the_boundary() {
    let grid = Grid::new(3).unwrap();
    let x = BoundaryConfig::parse("B3:++++++----------").unwrap();
    let tx = GridTrace::run(&x, 12).unwrap();
    let tuples = compatible_tuples(&grid);
    for t in SymmetryTransform::all() {
        let ty = GridTrace::run(&t.apply_boundary(&x), 12).unwrap();
        for tup in tuples.iter().step_by(7) {
            for sigma in [-1, 1] {
                let a = verify_fc_lemma(&tx, tup, sigma, 0).unwrap();
                let b = verify_fc_lemma(&ty, &tup.transformed(&grid, &t), t.apply_sign(sigma), 0)
                    .unwrap();
                assert_eq!(a.hypothesis_holds, b.hypothesis_holds, "{tup} {t:?}");
                assert_eq!(a.conclusion_holds, b.conclusion_holds, "{tup} {t:?}");
            }
        }
    }
}

#[test]
fn backward_needs_two_distinct_directions() {
    let grid = Grid::new(3).unwrap();
    let x = BoundaryConfig::parse("B3:++++++----------").unwrap();
    let tr = GridTrace::run(&x, 12).unwrap();
    let tuples = compatible_tuples(&grid);
    let t1 = tuples[0];
    let r = verify_bc_lemma(&tr, &t1, &t1, 1, 0).unwrap();
    assert!(r.direction.is_none());
    assert!(r.vacuous || !r.hypothesis_holds);
}
