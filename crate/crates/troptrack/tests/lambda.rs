//! The relation between complete tracks across a flip.

mod common;

use std::collections::BTreeMap;
use std::sync::OnceLock;

use troptrack::fixtures;
use troptrack::tracks::{
    lambda_in, AChart, ChainCase, FlipRelation, LambdaRelation, Position, TableCell,
};
use troptrack::tropical::a_mutate;

use common::{point, rng};

type Relations = Vec<(String, usize, FlipRelation, Vec<LambdaRelation>)>;

/// Every relation of every complete track across every flippable arc,
/// computed once and shared by the tests below.
fn all_relations() -> &'static Relations {
    static CACHE: OnceLock<Relations> = OnceLock::new();
    CACHE.get_or_init(compute_relations)
}

fn compute_relations() -> Relations {
    let mut out = Vec::new();
    for f in fixtures::all() {
        for k in 0..f.tri.num_arcs() {
            let Ok(rel) = FlipRelation::compute(&f.tri, k, &f.id) else { continue };
            let lams = rel.before.iter().map(|t| lambda_in(&rel, &f.tri, t).unwrap()).collect();
            out.push((f.id.clone(), k, rel, lams));
        }
    }
    out
}

#[test]
fn chains_laws_and_table_agreement() {
    let mut cells: BTreeMap<(Position, Position), usize> = BTreeMap::new();
    let mut degenerate = 0;
    for (id, k, rel, lams) in all_relations() {
        for (i, lam) in lams.iter().enumerate() {
            let case = lam.case.unwrap_or_else(|| panic!("{id} arc {k} track {i}: chain longer than 2"));
            assert!(!lam.successors.is_empty() && lam.successors.len() <= 2);
            assert!(lam.cone_identity, "{id} arc {k} track {i}");
            assert!(lam.agrees, "{id} arc {k} track {i}");
            assert!(lam.table_case_matches || lam.degenerate, "{id} arc {k} track {i}: {:?}", lam.positions);
            assert_ne!(lam.table, Some(TableCell::Excluded));
            assert!(lam.table.is_some());
            if case == ChainCase::OneToTwo {
                assert_eq!(lam.successors.len(), 2);
            }
            degenerate += usize::from(lam.degenerate);
            *cells.entry(lam.positions).or_default() += 1;
        }
        // Both sides are complete fans, so every track after the flip is
        // related to something before it.
        for j in 0..rel.after.len() {
            assert!(!rel.predecessors(j).is_empty());
        }
    }
    assert!(cells.contains_key(&(Position::Empty, Position::Empty)));
    assert!(!cells.contains_key(&(Position::P1, Position::P1)));
    assert!(!cells.contains_key(&(Position::P3, Position::P3)));
    assert!(degenerate > 0);
}

#[test]
fn empty_cell_is_one_to_one() {
    let mut seen = 0;
    for (id, _, _, lams) in all_relations() {
        for lam in lams.iter().filter(|l| l.positions == (Position::Empty, Position::Empty)) {
            assert_eq!(lam.successors.len(), 1, "{id}");
            assert_eq!(lam.case, Some(ChainCase::OneToOne));
            seen += 1;
        }
    }
    assert!(seen > 0);
}

#[test]
fn p2_p4_cell_splits_in_two() {
    let mut seen = 0;
    for (id, _, _, lams) in all_relations() {
        for lam in lams.iter().filter(|l| l.positions == (Position::P2, Position::P4) && !l.degenerate) {
            assert_eq!(lam.case, Some(ChainCase::OneToTwo), "{id}");
            seen += 1;
        }
    }
    assert!(seen > 0);
}

/// Random interior points of a domain land, after the tropical flip, in
/// the closed domain of some related track.
#[test]
fn sampled_images_land_in_successors() {
    let mut r = rng(31);
    for f in [fixtures::sphere4(), fixtures::torus(), fixtures::torus2()] {
        let b = f.tri.exchange_matrix();
        for k in 0..f.tri.num_arcs() {
            let Ok(rel) = FlipRelation::compute(&f.tri, k, &f.id) else { continue };
            let before: Vec<AChart> = rel.before.iter().map(|t| AChart::new(&f.tri, t).unwrap()).collect();
            let after: Vec<AChart> = rel.after.iter().map(|t| AChart::new(&rel.flipped, t).unwrap()).collect();
            for _ in 0..60 {
                let a = point(&mut r, f.tri.num_arcs());
                let Some(i) = before.iter().position(|c| c.interior_contains(&a)) else { continue };
                let a2 = a_mutate(&a, &b, k);
                let hits: Vec<usize> = (0..after.len()).filter(|&j| after[j].contains(&a2)).collect();
                assert!(!hits.is_empty());
                let succ = rel.successors(i);
                if let Some(j) = (0..after.len()).find(|&j| after[j].interior_contains(&a2)) {
                    assert!(succ.contains(&j), "{} arc {k}", f.id);
                }
            }
        }
    }
}
