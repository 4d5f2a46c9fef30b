//! Local-rule integration: verification, relabelling round trips, the
//! edge atlas and deception detection.

use std::sync::OnceLock;

use penrose_core::lattice::{Isometry, PlanarPoint};
use penrose_core::localrules::*;
use penrose_core::patch::{sun_patch, EquivMode, KMap, Patch};
use penrose_core::substitution::iterate_sigma;
use penrose_core::tile::{RhombusTile, Shape};

fn atlases() -> &'static PenroseAtlases {
    static CELL: OnceLock<PenroseAtlases> = OnceLock::new();
    CELL.get_or_init(|| PenroseAtlases::compute().unwrap())
}

#[test]
fn canonical_patch_passes_both_atlases() {
    let a = atlases();
    let patch = iterate_sigma(&sun_patch(), 5, None).unwrap().patch;
    let rep1 = verify_kmaps(&patch, &a.labelled1);
    assert!(rep1.pass);
    assert!(rep1.checked_vertices > 50);
    let rep0 = verify_kmaps(&patch.erase_labels(), &a.geometric0);
    assert!(rep0.pass);
}

#[test]
fn skipped_vertices_are_reported() {
    let a = atlases();
    let rep = verify_kmaps(&sun_patch(), &a.labelled1);
    // only the centre could certify at k=1, and it cannot in a bare sun
    assert_eq!(rep.checked_vertices, 0);
    assert!(!rep.skipped_boundary_vertices.is_empty());
}

#[test]
fn relabel_round_trip_sigma4() {
    let a = atlases();
    let original = iterate_sigma(&sun_patch(), 4, None).unwrap().patch;
    let relabelled = reconstruct_labels(&original.erase_labels(), a).unwrap();
    let mut labelled = 0;
    for t in relabelled.patch.tiles() {
        if t.mark.is_some() {
            labelled += 1;
            assert!(original.contains_tile(t), "wrong label on {t:?}");
        }
    }
    assert!(labelled as f64 > 0.8 * original.len() as f64);
}

#[test]
fn single_sun_star_decorated_from_its_one_map() {
    // a bare five-fat star has two decorations; its 1-map forces one
    let a = atlases();
    let seed = penrose_core::substitution::penrose_seed_kmap(1).unwrap();
    let patch = seed.to_patch();
    let relabelled = reconstruct_labels(&patch.erase_labels(), a).unwrap();
    let centre_tiles: Vec<&RhombusTile> = relabelled
        .patch
        .tiles()
        .iter()
        .filter(|t| t.corners().contains(&PlanarPoint::ORIGIN))
        .collect();
    assert_eq!(centre_tiles.len(), 5);
    for t in centre_tiles {
        assert_eq!(t.marked_corner(), Some(PlanarPoint::ORIGIN));
    }
}

#[test]
fn edge_atlas_regression_and_embedding() {
    let a = atlases();
    let ea = edge_atlas(&a.labelled1);
    assert_eq!(ea.len(), 14, "edge atlas cardinality (regression)");
    // unlabelled version coincides in size
    assert_eq!(edge_atlas(&a.geometric1).len(), 14);
    // every entry embeds in at least one 1-map
    for e in &ea {
        let embedded = a.labelled1.entries.iter().any(|one| {
            let p = one.to_patch();
            p.edge_patterns().iter().any(|ep| ep.canonical().tiles == e.tiles)
        });
        assert!(embedded);
    }
    // decorated entries are consistent: no matching error inside any
    for e in &ea {
        let p = Patch::from_tiles_unchecked(e.tiles.clone());
        assert!(matching_errors(&p).unwrap().is_empty());
    }
}

#[test]
fn edge_atlas_fixed_point_on_large_patch() {
    let a = atlases();
    let ea = edge_atlas(&a.labelled1);
    let patch = iterate_sigma(&sun_patch(), 7, None).unwrap().patch;
    let mut keys: Vec<_> = patch
        .edge_patterns()
        .iter()
        .map(|ep| {
            let c = ep.canonical();
            (c.tiles, c.edge)
        })
        .collect();
    keys.sort();
    keys.dedup();
    let mut atlas_keys: Vec<_> = ea
        .iter()
        .map(|e| {
            let c = e.canonical();
            (c.tiles, c.edge)
        })
        .collect();
    atlas_keys.sort();
    assert_eq!(keys, atlas_keys);
}

#[test]
fn edge_pattern_verification_mode() {
    let a = atlases();
    let ea = edge_atlas(&a.labelled1);
    let patch = iterate_sigma(&sun_patch(), 4, None).unwrap().patch;
    let rep = verify_edge_patterns(&patch, &ea);
    assert!(rep.pass);
    // a deception star fails the mode
    let bad = &deception_fixtures(a)[0];
    let rep = verify_edge_patterns(bad, &ea);
    assert!(!rep.pass || rep.checked_vertices == 0);
}

#[test]
fn deceptions_are_match_legal_but_atlas_illegal() {
    let a = atlases();
    let fixtures = deception_fixtures(a);
    assert!(fixtures.len() >= 2, "need at least two deception fixtures");
    for f in &fixtures {
        f.validate_geometry().unwrap();
        let rep = check_deception(f, a).unwrap();
        assert!(rep.matching_ok, "fixture has matching errors");
        assert!(!rep.atlas_ok, "fixture unexpectedly legal");
        assert!(rep.is_deception());
    }
    // whereas canonical sub-patches are no deceptions
    let good = iterate_sigma(&sun_patch(), 3, None).unwrap().patch;
    let rep = check_deception(&good, a).unwrap();
    assert!(rep.matching_ok && rep.atlas_ok && !rep.is_deception());
}

#[test]
fn sigma_image_is_no_deception() {
    let a = atlases();
    let patch = iterate_sigma(&sun_patch(), 2, None).unwrap().patch;
    let image = penrose_core::substitution::apply_sigma(&patch).unwrap();
    let rep = check_deception(&image, a).unwrap();
    assert!(!rep.is_deception());
    assert!(rep.matching_ok && rep.atlas_ok);
}

#[test]
fn illegal_star_fails_zero_atlas_check() {
    // a patch in the style of a random rhombus tiling: ten thin rhombi
    // around one vertex, which no Penrose tiling allows
    let a = atlases();
    let mut tiles = Vec::new();
    for i in 0..5u8 {
        tiles.push(RhombusTile::new(
            Shape::Thin,
            PlanarPoint::ORIGIN,
            2 * i,
            None,
        ));
        tiles.push(RhombusTile::new(
            Shape::Thin,
            PlanarPoint::ORIGIN,
            2 * i + 1,
            None,
        ));
    }
    let p = Patch::new(tiles).unwrap();
    assert!(p.is_interior_vertex(&PlanarPoint::ORIGIN));
    let rep = verify_kmaps(&p, &a.geometric0);
    assert!(!rep.pass);
}

#[test]
fn labelled_one_maps_determine_their_labels() {
    // 15 labelled = 15 unlabelled 1-maps: erasure is injective on the
    // 1-atlas
    let a = atlases();
    let mut erased: Vec<Vec<RhombusTile>> = a
        .labelled1
        .entries
        .iter()
        .map(|e| {
            KMap {
                center: PlanarPoint::ORIGIN,
                tiles: e.tiles.clone(),
                k: 1,
            }
            .erase_labels()
            .canonical(EquivMode::Isometry)
            .tiles
        })
        .collect();
    erased.sort();
    erased.dedup();
    assert_eq!(erased.len(), 15);
}

#[test]
fn decorations_cover_six_uniquely_and_sun_star_doubly() {
    // of the 7 unlabelled star classes, six have exactly one decoration
    // and the five-fat class has two
    let a = atlases();
    for e in &a.geometric0.entries {
        let star = KMap {
            center: PlanarPoint::ORIGIN,
            tiles: e.tiles.clone(),
            k: 0,
        };
        let mut decorations: Vec<Vec<RhombusTile>> = Vec::new();
        for lab in &a.labelled0.entries {
            for g in Isometry::all() {
                let placed: Vec<RhombusTile> =
                    lab.tiles.iter().map(|t| t.apply_isometry(&g)).collect();
                let mut erased: Vec<RhombusTile> =
                    placed.iter().map(|t| t.erase_label()).collect();
                erased.sort();
                let mut want = star.tiles.clone();
                want.sort();
                if erased == want {
                    let mut p = placed;
                    p.sort();
                    if !decorations.contains(&p) {
                        decorations.push(p);
                    }
                }
            }
        }
        let five_fat = e.tiles.len() == 5 && e.tiles.iter().all(|t| t.shape == Shape::Fat);
        assert_eq!(decorations.len(), if five_fat { 2 } else { 1 });
    }
}
