use bnl_core::cobordism::Movie;
use bnl_core::complex::BuildOptions;
use bnl_core::diagram::{apply_move, r_insertions, Move};
use bnl_core::lee::{canonical_basis, canonical_image, Orientation};
use bnl_core::{parse_pd, Diagram};

fn corpus() -> Vec<Diagram> {
    vec![
        Diagram::unlink(1),
        Diagram::unlink(2),
        parse_pd("X(1,3,2,4) X(3,1,4,2)").unwrap(),
        parse_pd("X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)").unwrap(),
        parse_pd("X(4,2,5,1) X(8,6,1,5) X(6,3,7,4) X(2,7,3,8)").unwrap(),
    ]
}

fn single_move_movies(d: &Diagram) -> Vec<Movie> {
    let mut out = vec![Movie::new(d.clone(), vec![]), Movie::new(d.clone(), vec![Move::Birth])];
    for &l in &d.labels {
        for &k in &d.labels {
            if l <= k {
                let m = Move::Saddle { a: l, b: k };
                if apply_move(d, &m).is_ok() {
                    out.push(Movie::new(d.clone(), vec![m]));
                }
            }
        }
        let m = Move::Death { strand: l };
        if apply_move(d, &m).is_ok() {
            out.push(Movie::new(d.clone(), vec![m]));
        }
    }
    out
}

#[test]
fn canonical_images_match_compatible_orientations() {
    let opts = BuildOptions::default();
    for d in corpus() {
        for movie in single_move_movies(&d) {
            for o in Orientation::all(d.n_components()) {
                let img = canonical_image(&movie, &o, &opts).unwrap();
                assert!(img.agrees(), "{}\norientation {o}: {img:?}", movie.to_text());
            }
        }
    }
}

#[test]
fn reidemeister_moves_carry_canonical_classes() {
    let opts = BuildOptions::default();
    for d in corpus().into_iter().take(4) {
        for m in r_insertions(&d).into_iter().take(6) {
            let movie = Movie::new(d.clone(), vec![m]);
            for o in Orientation::all(d.n_components()) {
                let img = canonical_image(&movie, &o, &opts).unwrap();
                assert!(img.agrees(), "{}\norientation {o}: {img:?}", movie.to_text());
                assert_eq!(img.computed.len(), 1);
            }
        }
    }
}

#[test]
fn canonical_degrees_match_support() {
    for d in corpus() {
        let b = canonical_basis(&d, &BuildOptions::default()).unwrap();
        assert!(b.is_basis);
        let mut support = std::collections::BTreeMap::new();
        for h in b.degrees().values() {
            *support.entry(*h).or_insert(0usize) += 1;
        }
        assert_eq!(support, b.betti);
    }
}
