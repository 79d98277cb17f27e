use bnl_core::complex::{build_complex, homology, simplify, BuildOptions};
use bnl_core::diagram::disjoint_union;
use bnl_core::lasagna::{cable_system, enumerate_double_classes, glue_torsion_transport, kunneth_mu, Gluing};
use bnl_core::torsion::TorsionOrder;
use bnl_core::{parse_pd, Diagram, Error, FrobeniusTheory, GradedModule};

const TREFOIL: &str = "X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)";

fn bn(d: &Diagram) -> GradedModule {
    homology(&simplify(&build_complex(d, &FrobeniusTheory::bar_natan()).unwrap())).module()
}

#[test]
fn kunneth_balances_with_hopf() {
    let hopf = parse_pd("X(1,3,2,4) X(3,1,4,2)").unwrap();
    let t = parse_pd(TREFOIL).unwrap();
    let r = kunneth_mu(&bn(&hopf), &bn(&t), &bn(&disjoint_union(&hopf, &t))).unwrap();
    assert!(r.balanced && r.iso);
}

#[test]
fn transport_on_knots() {
    let g = Gluing::of_diagrams(&parse_pd(TREFOIL).unwrap(), &Diagram::unlink(1), &FrobeniusTheory::bar_natan()).unwrap();
    assert!(g.gate());
    // The torsion generators of the trefoil sit in degree -2.
    for k in 0..g.left_hom.gens_at(-2).len() {
        for j in 0..2 {
            let r = glue_torsion_transport(&g, &g.left_hom.generator(-2, k), &g.right_hom.generator(0, j)).unwrap();
            assert_eq!(r.transported, TorsionOrder::Finite(1));
            assert!(r.agree);
        }
    }
    let r = glue_torsion_transport(&g, &g.left_hom.generator(0, 0), &g.right_hom.generator(0, 0)).unwrap();
    assert_eq!(r.transported, TorsionOrder::Infinite);

    let t = parse_pd(TREFOIL).unwrap();
    let g = Gluing::of_diagrams(&t, &t, &FrobeniusTheory::bar_natan()).unwrap();
    let err = glue_torsion_transport(&g, &g.left_hom.generator(-2, 0), &g.right_hom.generator(-2, 0));
    assert!(matches!(err, Err(Error::TorObstruction(_))));
}

#[test]
fn twisted_single_cable_stage() {
    let k = Diagram::unlink(1).with_framings(vec![-1]).unwrap();
    let sys = cable_system(&k, &Diagram::empty(), &[1], 0, &BuildOptions::default()).unwrap();
    let s = &sys.stages[0];
    // One copy of a framed unknot is the unknot; only the shift remains.
    assert_eq!(s.module(), bn(&Diagram::unlink(1)).shifted(0, 1));
}

#[test]
fn double_classes_cover_the_box() {
    let two = parse_pd("components: 1 | 2\nframing: 0 -1").unwrap();
    let classes = enumerate_double_classes(&two, &Diagram::unlink(1), 1);
    assert_eq!(classes.len(), 2 * 81);
    assert!(classes.iter().all(|c| c.eps_plus.len() == 1 && c.alpha_plus.len() == 2));
}
