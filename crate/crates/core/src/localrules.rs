//! Local rules: verification of patches against atlases, reconstruction
//! of the arrow labels of an unlabelled patch whose 1-maps are legal,
//! the edge atlas, deception detection, and the periodic patch that
//! separates the 0-atlas check from the 1-atlas check.

use std::collections::{HashMap, HashSet};

use crate::lattice::{direction, FramePoint, Isometry, PlanarPoint};
use crate::patch::{edge_key, Atlas, EdgePattern, EquivMode, KMap, Patch};
use crate::substitution::{atlas_by_substitution, penrose_seed_kmap, AtlasGraph, SubstitutionRule};
use crate::tile::{RhombusTile, Shape};
use crate::{Error, Result};

/// The computed Penrose atlases (isometry mode), shared by the local-rule
/// operations.
#[derive(Clone, Debug)]
pub struct PenroseAtlases {
    pub labelled0: Atlas,
    pub labelled1: Atlas,
    pub geometric0: Atlas,
    pub geometric1: Atlas,
    pub graph1: AtlasGraph,
}

impl PenroseAtlases {
    pub fn compute() -> Result<PenroseAtlases> {
        let rule = SubstitutionRule::penrose();
        let (labelled0, _) =
            atlas_by_substitution(&rule, &penrose_seed_kmap(0)?, 0, EquivMode::Isometry)?;
        let (labelled1, graph1) =
            atlas_by_substitution(&rule, &penrose_seed_kmap(1)?, 1, EquivMode::Isometry)?;
        let geometric0 = labelled0.erase_labels();
        let geometric1 = labelled1.erase_labels();
        Ok(PenroseAtlases {
            labelled0,
            labelled1,
            geometric0,
            geometric1,
            graph1,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FailureSite {
    Vertex(PlanarPoint),
    Edge(PlanarPoint, PlanarPoint),
}

#[derive(Clone, Debug)]
pub struct Failure {
    pub site: FailureSite,
    pub reason: String,
}

/// Outcome of a verification pass.
#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub pass: bool,
    pub checked_vertices: usize,
    pub skipped_boundary_vertices: Vec<PlanarPoint>,
    pub failures: Vec<Failure>,
}

/// Tests every certifiable k-map of the patch for membership in the
/// atlas; boundary vertices that cannot be certified are reported as
/// skipped. Labels are erased first when the atlas is unlabelled.
pub fn verify_kmaps(patch: &Patch, atlas: &Atlas) -> VerificationReport {
    let labelled_atlas = atlas
        .entries
        .first()
        .is_some_and(|e| e.is_labelled() && !e.tiles.is_empty());
    let mut report = VerificationReport {
        pass: true,
        checked_vertices: 0,
        skipped_boundary_vertices: Vec::new(),
        failures: Vec::new(),
    };
    let mut vs: Vec<PlanarPoint> = patch.vertices().copied().collect();
    vs.sort();
    for v in vs {
        match patch.extract_kmap(&v, atlas.k) {
            Err(_) => report.skipped_boundary_vertices.push(v),
            Ok(km) => {
                report.checked_vertices += 1;
                let km = if labelled_atlas { km } else { km.erase_labels() };
                if labelled_atlas && !km.is_labelled() {
                    report.pass = false;
                    report.failures.push(Failure {
                        site: FailureSite::Vertex(v),
                        reason: "unlabelled tiles checked against a labelled atlas".into(),
                    });
                    continue;
                }
                if !atlas.contains(&km) {
                    report.pass = false;
                    report.failures.push(Failure {
                        site: FailureSite::Vertex(v),
                        reason: format!("{}-map not in atlas", atlas.k),
                    });
                }
            }
        }
    }
    report
}

/// A placed decoration: the labelled version(s) of one vertex star.
#[derive(Clone, Debug)]
pub struct VertexDecoration {
    /// Index into the labelled 0-atlas.
    pub class: usize,
    /// The star tiles with their marks, placed.
    pub tiles: Vec<RhombusTile>,
}

/// All placed labelled stars that erase to the given unlabelled star.
fn placed_decorations(
    atlases: &PenroseAtlases,
    star: &KMap,
    at: &PlanarPoint,
) -> Vec<VertexDecoration> {
    let target: HashSet<RhombusTile> = star.tiles.iter().map(|t| t.erase_label()).collect();
    let mut out: Vec<Vec<RhombusTile>> = Vec::new();
    let mut classes: Vec<usize> = Vec::new();
    for (ci, entry) in atlases.labelled0.entries.iter().enumerate() {
        for g in Isometry::all() {
            let placed: Vec<RhombusTile> = entry
                .tiles
                .iter()
                .map(|t| t.apply_isometry(&g).translate(at))
                .collect();
            let erased: HashSet<RhombusTile> = placed.iter().map(|t| t.erase_label()).collect();
            if erased == target {
                let mut sorted = placed;
                sorted.sort();
                if !out.contains(&sorted) {
                    out.push(sorted);
                    classes.push(ci);
                }
            }
        }
    }
    classes
        .into_iter()
        .zip(out)
        .map(|(class, tiles)| VertexDecoration { class, tiles })
        .collect()
}

/// Result of label reconstruction.
#[derive(Clone, Debug)]
pub struct Relabelled {
    pub patch: Patch,
    /// Vertices whose stars could not be certified (no decoration applied
    /// from them).
    pub skipped_vertices: Vec<PlanarPoint>,
    /// Number of tiles that received a mark.
    pub labelled_tiles: usize,
}

/// Reconstructs the arrow labels of an unlabelled patch whose certifiable
/// 1-maps all lie in the 1-atlas: decorate each certified vertex star (the
/// sun/star case is disambiguated by its 1-map) and check that every tile
/// receives a single consistent mark.
pub fn reconstruct_labels(patch: &Patch, atlases: &PenroseAtlases) -> Result<Relabelled> {
    let mut opinions: HashMap<RhombusTile, (RhombusTile, PlanarPoint)> = HashMap::new();
    let mut skipped = Vec::new();
    let mut vs: Vec<PlanarPoint> = patch.vertices().copied().collect();
    vs.sort();
    for v in vs {
        let Ok(star) = patch.extract_kmap(&v, 0) else {
            skipped.push(v);
            continue;
        };
        let decos = placed_decorations(atlases, &star, &v);
        let chosen: Vec<RhombusTile> = match decos.len() {
            0 => {
                return Err(Error::PreconditionViolated(format!(
                    "0-map at {v:?} has no legal decoration"
                )))
            }
            1 => decos.into_iter().next().unwrap().tiles,
            2 => {
                // sun/star: the 1-map forces the choice
                let Ok(one) = patch.extract_kmap(&v, 1) else {
                    skipped.push(v);
                    continue;
                };
                let forced = force_by_one_map(atlases, &one, &v)?;
                let Some(star_tiles) = forced else {
                    return Err(Error::PreconditionViolated(format!(
                        "1-map at {v:?} not in the 1-atlas"
                    )));
                };
                star_tiles
                    .into_iter()
                    .filter(|t| t.corners().contains(&v))
                    .collect()
            }
            n => {
                return Err(Error::PreconditionViolated(format!(
                    "0-map at {v:?} has {n} decorations"
                )))
            }
        };
        for t in chosen {
            let key = t.erase_label();
            match opinions.get(&key) {
                None => {
                    opinions.insert(key, (t, v));
                }
                Some((prev, pv)) => {
                    if *prev != t {
                        // two endpoint decorations disagree on this tile
                        let e = shared_edge_for(&key, pv, &v);
                        return Err(Error::InconsistentEdge(format!(
                            "tile {key:?} labelled differently from {pv:?} and {v:?} (edge {e:?})"
                        )));
                    }
                }
            }
        }
    }
    let mut labelled_tiles = 0usize;
    let tiles: Vec<RhombusTile> = patch
        .tiles()
        .iter()
        .map(|t| match opinions.get(&t.erase_label()) {
            Some((lab, _)) => {
                labelled_tiles += 1;
                *lab
            }
            None => *t,
        })
        .collect();
    Ok(Relabelled {
        patch: Patch::from_tiles_unchecked(tiles),
        skipped_vertices: skipped,
        labelled_tiles,
    })
}

fn shared_edge_for(
    tile: &RhombusTile,
    a: &PlanarPoint,
    b: &PlanarPoint,
) -> Option<(PlanarPoint, PlanarPoint)> {
    let edges = tile.edges();
    edges
        .iter()
        .find(|(x, y)| (x == a && y == b) || (x == b && y == a))
        .map(|(x, y)| (*x, *y))
}

/// The unique placed labelled 1-map matching an unlabelled one, if any.
fn force_by_one_map(
    atlases: &PenroseAtlases,
    one: &KMap,
    at: &PlanarPoint,
) -> Result<Option<Vec<RhombusTile>>> {
    let target: HashSet<RhombusTile> = one.tiles.iter().map(|t| t.erase_label()).collect();
    let mut found: Option<Vec<RhombusTile>> = None;
    for entry in &atlases.labelled1.entries {
        for g in Isometry::all() {
            let placed: Vec<RhombusTile> = entry
                .tiles
                .iter()
                .map(|t| t.apply_isometry(&g).translate(at))
                .collect();
            let erased: HashSet<RhombusTile> = placed.iter().map(|t| t.erase_label()).collect();
            if erased == target {
                let mut sorted = placed;
                sorted.sort();
                match &found {
                    None => found = Some(sorted),
                    Some(prev) if *prev != sorted => {
                        return Err(Error::PreconditionViolated(format!(
                            "ambiguous labelled 1-map at {at:?}"
                        )))
                    }
                    _ => {}
                }
            }
        }
    }
    Ok(found)
}

/// The edge atlas derived from the 1-atlas: every pattern formed by the
/// tiles around one edge, up to isometry. Each entry is included in some
/// 1-map by construction.
pub fn edge_atlas(k1_atlas: &Atlas) -> Vec<EdgePattern> {
    let mut seen: HashSet<(Vec<RhombusTile>, (PlanarPoint, PlanarPoint))> = HashSet::new();
    let mut out = Vec::new();
    for entry in &k1_atlas.entries {
        let p = entry.to_patch();
        for ep in p.edge_patterns() {
            let c = ep.canonical();
            if seen.insert((c.tiles.clone(), c.edge)) {
                out.push(c);
            }
        }
    }
    out.sort();
    out
}

/// Additional verification mode: every certifiable edge pattern of the
/// patch must belong to the edge atlas. No completeness claim is made for
/// this mode; it complements the k-map checks.
pub fn verify_edge_patterns(patch: &Patch, atlas: &[EdgePattern]) -> VerificationReport {
    let keys: HashSet<(Vec<RhombusTile>, (PlanarPoint, PlanarPoint))> = atlas
        .iter()
        .map(|e| {
            let c = e.canonical();
            (c.tiles, c.edge)
        })
        .collect();
    let labelled = atlas
        .first()
        .is_some_and(|e| e.tiles.iter().all(|t| t.mark.is_some()));
    let mut report = VerificationReport {
        pass: true,
        checked_vertices: 0,
        skipped_boundary_vertices: Vec::new(),
        failures: Vec::new(),
    };
    for ep in patch.edge_patterns() {
        report.checked_vertices += 1;
        let ep = if labelled { ep } else { ep.erase_labels() };
        let c = ep.canonical();
        if !keys.contains(&(c.tiles, c.edge)) {
            report.pass = false;
            report.failures.push(Failure {
                site: FailureSite::Edge(ep.edge.0, ep.edge.1),
                reason: "edge pattern not in atlas".into(),
            });
        }
    }
    report
}

/// Interior edges whose two tiles disagree on kind or head.
pub fn matching_errors(patch: &Patch) -> Result<Vec<(PlanarPoint, PlanarPoint)>> {
    let mut bad = Vec::new();
    for (a, b) in patch.edges() {
        let ts = patch.tiles_at_edge(*a, *b);
        if ts.len() == 2 {
            let t1 = &patch.tiles()[ts[0] as usize];
            let t2 = &patch.tiles()[ts[1] as usize];
            let (Some(l1), Some(l2)) = (t1.label_on(a, b), t2.label_on(a, b)) else {
                return Err(Error::PreconditionViolated(
                    "matching check requires labelled tiles".into(),
                ));
            };
            if l1 != l2 {
                bad.push(edge_key(*a, *b));
            }
        }
    }
    bad.sort();
    Ok(bad)
}

/// Deception verdict: arrow-matching validity vs atlas membership of the
/// certifiable 0- and 1-maps.
#[derive(Clone, Debug)]
pub struct DeceptionReport {
    pub matching_ok: bool,
    pub atlas_ok: bool,
    pub matching_failures: Vec<(PlanarPoint, PlanarPoint)>,
    pub atlas_failures: Vec<Failure>,
}

impl DeceptionReport {
    /// A deception is match-legal but atlas-illegal.
    pub fn is_deception(&self) -> bool {
        self.matching_ok && !self.atlas_ok
    }
}

pub fn check_deception(patch: &Patch, atlases: &PenroseAtlases) -> Result<DeceptionReport> {
    let matching_failures = matching_errors(patch)?;
    let mut atlas_failures = Vec::new();
    for (k, atlas) in [(0u32, &atlases.labelled0), (1, &atlases.labelled1)] {
        let mut vs: Vec<PlanarPoint> = patch.vertices().copied().collect();
        vs.sort();
        for v in vs {
            if let Ok(km) = patch.extract_kmap(&v, k) {
                if !atlas.contains(&km) {
                    atlas_failures.push(Failure {
                        site: FailureSite::Vertex(v),
                        reason: format!("labelled {k}-map not in atlas"),
                    });
                }
            }
        }
    }
    Ok(DeceptionReport {
        matching_ok: matching_failures.is_empty(),
        atlas_ok: atlas_failures.is_empty(),
        matching_failures,
        atlas_failures,
    })
}

/// Placement of a labelled tile with a designated corner at the origin,
/// spanning the angular interval [theta, theta+angle].
fn tile_with_corner_at_origin(
    shape: Shape,
    corner: usize,
    mark: bool,
    theta: u8,
) -> (RhombusTile, u8) {
    let s = shape.spread();
    let (o, width) = match corner {
        0 => (theta % 10, s),
        1 => ((theta + 10 - s) % 10, 5 - s),
        2 => ((theta + 5) % 10, s),
        _ => ((theta + 5 + 10 - s) % 10, 5 - s),
    };
    let probe = RhombusTile {
        shape,
        anchor: PlanarPoint::ORIGIN,
        orient: o,
        mark: Some(mark),
    };
    let offset = probe.corners()[corner];
    let anchored = RhombusTile::new(shape, PlanarPoint::ORIGIN.sub(&offset), o, Some(mark));
    (anchored, width)
}

/// Exhaustive enumeration of the match-legal labelled vertex stars: fans
/// of tiles around the origin whose shared edges agree on arrow kind and
/// head, including the closing edge. Returns canonical 0-map patches.
pub fn enumerate_match_legal_stars() -> Vec<Vec<RhombusTile>> {
    let mut results: HashSet<Vec<RhombusTile>> = HashSet::new();
    // depth-first over fans starting at angle 0
    struct State {
        tiles: Vec<RhombusTile>,
        theta: u8,
    }
    let mut stack: Vec<State> = Vec::new();
    for shape in [Shape::Fat, Shape::Thin] {
        for corner in 0..4usize {
            for mark in [false, true] {
                let (t, w) = tile_with_corner_at_origin(shape, corner, mark, 0);
                stack.push(State {
                    tiles: vec![t],
                    theta: w,
                });
            }
        }
    }
    while let Some(st) = stack.pop() {
        if st.theta == 10 {
            // closing edge: last tile vs first tile along w_0
            let o = PlanarPoint::ORIGIN;
            let e = direction(0);
            let first = st.tiles.first().unwrap();
            let last = st.tiles.last().unwrap();
            if first.label_on(&o, &e) == last.label_on(&o, &e) {
                let km = KMap {
                    center: o,
                    tiles: st.tiles.clone(),
                    k: 0,
                };
                results.insert(km.canonical(EquivMode::Isometry).tiles);
            }
            continue;
        }
        if st.theta > 10 {
            continue;
        }
        let o = PlanarPoint::ORIGIN;
        let shared = direction(st.theta);
        let prev_label = st.tiles.last().unwrap().label_on(&o, &shared);
        for shape in [Shape::Fat, Shape::Thin] {
            for corner in 0..4usize {
                for mark in [false, true] {
                    let (t, w) = tile_with_corner_at_origin(shape, corner, mark, st.theta);
                    if t.label_on(&o, &shared) != prev_label {
                        continue;
                    }
                    let mut tiles = st.tiles.clone();
                    tiles.push(t);
                    stack.push(State {
                        tiles,
                        theta: st.theta + w,
                    });
                }
            }
        }
    }
    let mut out: Vec<Vec<RhombusTile>> = results.into_iter().collect();
    out.sort();
    out
}

/// Match-legal single-vertex stars that are not in the labelled 0-atlas:
/// ready-made deceptions.
pub fn deception_fixtures(atlases: &PenroseAtlases) -> Vec<Patch> {
    enumerate_match_legal_stars()
        .into_iter()
        .filter(|tiles| {
            let km = KMap {
                center: PlanarPoint::ORIGIN,
                tiles: tiles.clone(),
                k: 0,
            };
            !atlases.labelled0.contains(&km)
        })
        .map(Patch::from_tiles_unchecked)
        .collect()
}

/// A periodic rhombus tiling whose vertex stars all lie in the geometric
/// 0-atlas, plus one certified 1-map that is not in the 1-atlas.
#[derive(Clone, Debug)]
pub struct PeriodicWitness {
    pub fundamental: Vec<RhombusTile>,
    pub periods: [PlanarPoint; 2],
    /// 5×5 block of translated copies, large enough to certify interior
    /// 1-maps.
    pub patch: Patch,
    pub failing_one_map_center: PlanarPoint,
}

/// Exhaustive toroidal backtracking over small period lattices. Finds a
/// periodic tiling whose 0-maps are all legal; by aperiodicity of the
/// Penrose tilings some 1-map must then fall outside the 1-atlas, and the
/// witness records one.
pub fn find_periodic_witness(atlases: &PenroseAtlases) -> Result<PeriodicWitness> {
    // star compositions for pruning
    let star_angle_multisets: Vec<Vec<u8>> = atlases
        .geometric0
        .entries
        .iter()
        .map(|e| {
            let p = e.to_patch();
            let mut a: Vec<u8> = p
                .tiles_at(&PlanarPoint::ORIGIN)
                .map(|t| {
                    let cs = t.corners();
                    let ci = cs.iter().position(|c| *c == PlanarPoint::ORIGIN).unwrap();
                    t.corner_angles()[ci]
                })
                .collect();
            a.sort_unstable();
            a
        })
        .collect();

    for (t1, t2) in candidate_periods() {
        if let Some(fundamental) =
            torus_search(&t1, &t2, atlases, &star_angle_multisets, 400_000)
        {
            // assemble a 5×5 block
            let mut tiles = Vec::new();
            for a in -2i64..=2 {
                for b in -2i64..=2 {
                    let shift = shift_by(&t1, a).add(&shift_by(&t2, b));
                    for t in &fundamental {
                        tiles.push(t.translate(&shift));
                    }
                }
            }
            let patch = Patch::from_tiles_unchecked(tiles);
            patch.validate_geometry().map_err(|e| {
                Error::ClaimFalsified(format!("periodic witness assembly invalid: {e}"))
            })?;
            // locate a certified 1-map outside the atlas
            let mut vs: Vec<PlanarPoint> = patch.vertices().copied().collect();
            vs.sort();
            for v in vs {
                if let Ok(km) = patch.extract_kmap(&v, 1) {
                    if !atlases.geometric1.contains(&km.erase_labels()) {
                        return Ok(PeriodicWitness {
                            fundamental,
                            periods: [t1, t2],
                            patch,
                            failing_one_map_center: v,
                        });
                    }
                }
            }
            return Err(Error::ClaimFalsified(
                "periodic tiling with all 1-maps in the 1-atlas".into(),
            ));
        }
    }
    Err(Error::ResourceLimit(
        "no periodic witness found within the search bounds".into(),
    ))
}

fn shift_by(t: &PlanarPoint, n: i64) -> PlanarPoint {
    let mut c = [0i64; 5];
    for k in 0..5 {
        c[k] = t.0[k] * n;
    }
    PlanarPoint::new(c)
}

/// Small period-lattice candidates: all lattice vectors within four unit
/// steps, paired, Gauss-reduced to a canonical basis per lattice and
/// deduplicated by the isometry class of the pair; smallest cells first.
fn candidate_periods() -> Vec<(PlanarPoint, PlanarPoint)> {
    let mut vectors: Vec<PlanarPoint> = Vec::new();
    let mut seen = HashSet::new();
    let mut c = [0i64; 5];
    enumerate_small(&mut c, 0, 4, &mut |c| {
        let p = PlanarPoint::new(*c);
        if p == PlanarPoint::ORIGIN || !seen.insert(p) {
            return;
        }
        let n2 = FramePoint::from_planar(&p).norm2().to_f64();
        if (1.3..=42.0).contains(&n2) {
            vectors.push(p);
        }
    });
    vectors.sort();
    let norm2 = |p: &PlanarPoint| FramePoint::from_planar(p).norm2().to_f64();
    let mut lattices: HashSet<Vec<RhombusTile>> = HashSet::new(); // reuse Ord key via tiles? no
    let mut keyset: HashSet<(PlanarPoint, PlanarPoint)> = HashSet::new();
    let mut pairs: Vec<(PlanarPoint, PlanarPoint, f64)> = Vec::new();
    let _ = &mut lattices;
    for i in 0..vectors.len() {
        for j in i + 1..vectors.len() {
            let (mut a, mut b) = (vectors[i], vectors[j]);
            let fa = FramePoint::from_planar(&a);
            let fb = FramePoint::from_planar(&b);
            let cross = (fa.x * fb.y - fa.y * fb.x).to_f64() * 0.5877852522924731;
            if !(2.2..=22.0).contains(&cross.abs()) {
                continue;
            }
            // Gauss basis reduction
            for _ in 0..12 {
                if norm2(&b) < norm2(&a) {
                    std::mem::swap(&mut a, &mut b);
                }
                let mut improved = false;
                for cand in [b.add(&a), b.sub(&a)] {
                    if norm2(&cand) + 1e-9 < norm2(&b) {
                        b = cand;
                        improved = true;
                        break;
                    }
                }
                if !improved {
                    break;
                }
            }
            // canonical pair under the 20 isometries and sign flips
            let mut best: Option<(PlanarPoint, PlanarPoint)> = None;
            for g in Isometry::all() {
                for sa in [1i64, -1] {
                    for sb in [1i64, -1] {
                        let mut ga = g.apply(&a);
                        let mut gb = g.apply(&b);
                        if sa < 0 {
                            ga = ga.neg();
                        }
                        if sb < 0 {
                            gb = gb.neg();
                        }
                        let pair = if ga <= gb { (ga, gb) } else { (gb, ga) };
                        if best.map_or(true, |bst| pair < bst) {
                            best = Some(pair);
                        }
                    }
                }
            }
            let key = best.unwrap();
            if keyset.insert(key) {
                pairs.push((key.0, key.1, cross.abs()));
            }
        }
    }
    pairs.sort_by(|x, y| {
        x.2.partial_cmp(&y.2)
            .unwrap()
            .then(x.0.cmp(&y.0))
            .then(x.1.cmp(&y.1))
    });
    pairs.into_iter().map(|(a, b, _)| (a, b)).collect()
}

fn enumerate_small(c: &mut [i64; 5], idx: usize, left: i64, f: &mut impl FnMut(&[i64; 5])) {
    if idx == 5 {
        f(c);
        return;
    }
    for v in -left..=left {
        c[idx] = v;
        enumerate_small(c, idx + 1, left - v.abs(), f);
        c[idx] = 0;
    }
}

/// Backtracking tile filler on the torus R²/Λ with incremental incidence
/// bookkeeping. Tiles are stored at reduced representatives; their 3×3
/// block of translates backs all geometric tests. Returns a fundamental
/// tile set on success.
fn torus_search(
    t1: &PlanarPoint,
    t2: &PlanarPoint,
    atlases: &PenroseAtlases,
    star_multisets: &[Vec<u8>],
    node_budget: usize,
) -> Option<Vec<RhombusTile>> {
    let mut st = TorusState::new(t1, t2, atlases, star_multisets, node_budget)?;
    let first = RhombusTile::new(Shape::Fat, PlanarPoint::ORIGIN, 0, None);
    if !st.push_tile(&first) {
        return None;
    }
    if st.recurse() {
        Some(st.fundamental)
    } else {
        None
    }
}

/// Memoized conflict oracle: whether two placed tiles overlap or break the
/// edge-to-edge condition depends only on shapes, orientations and the
/// relative anchor.
struct ConflictTable {
    map: HashMap<(Shape, u8, Shape, u8, PlanarPoint), bool>,
}

impl ConflictTable {
    fn new() -> ConflictTable {
        ConflictTable {
            map: HashMap::new(),
        }
    }

    fn conflict(&mut self, a: &RhombusTile, b: &RhombusTile) -> bool {
        let delta = b.anchor.sub(&a.anchor);
        let key = (a.shape, a.orient, b.shape, b.orient, delta);
        if let Some(&c) = self.map.get(&key) {
            return c;
        }
        let ta = RhombusTile::new(a.shape, PlanarPoint::ORIGIN, a.orient, None);
        let tb = RhombusTile::new(b.shape, delta, b.orient, None);
        let c = crate::patch::tiles_conflict(&ta, &tb);
        self.map.insert(key, c);
        c
    }
}

struct TorusState<'a> {
    t1: PlanarPoint,
    t2: PlanarPoint,
    f1: FramePoint,
    f2: FramePoint,
    det: crate::golden::GoldenNum,
    star_multisets: &'a [Vec<u8>],
    budget: usize,
    fundamental: Vec<RhombusTile>,
    hood: HashSet<RhombusTile>,
    angle: HashMap<PlanarPoint, u32>,
    at: HashMap<PlanarPoint, Vec<RhombusTile>>,
    edge_cnt: HashMap<(PlanarPoint, PlanarPoint), u8>,
    buckets: HashMap<(i64, i64), Vec<RhombusTile>>,
    /// legal 0-map keys for O(1) star checks
    star_keys: HashSet<Vec<RhombusTile>>,
    incomplete: std::collections::BTreeSet<PlanarPoint>,
    central_cache: HashMap<PlanarPoint, bool>,
    skip_legality: bool,
    conflicts: ConflictTable,
}

impl<'a> TorusState<'a> {
    fn new(
        t1: &PlanarPoint,
        t2: &PlanarPoint,
        atlases: &'a PenroseAtlases,
        star_multisets: &'a [Vec<u8>],
        budget: usize,
    ) -> Option<TorusState<'a>> {
        let f1 = FramePoint::from_planar(t1);
        let f2 = FramePoint::from_planar(t2);
        let det = f1.x * f2.y - f1.y * f2.x;
        if det.is_zero() {
            return None;
        }
        let star_keys = atlases
            .geometric0
            .entries
            .iter()
            .map(|e| e.tiles.clone())
            .collect();
        Some(TorusState {
            t1: *t1,
            t2: *t2,
            f1,
            f2,
            det,
            star_multisets,
            budget,
            fundamental: Vec::new(),
            hood: HashSet::new(),
            angle: HashMap::new(),
            at: HashMap::new(),
            edge_cnt: HashMap::new(),
            buckets: HashMap::new(),
            star_keys,
            incomplete: std::collections::BTreeSet::new(),
            central_cache: HashMap::new(),
            skip_legality: false,
            conflicts: ConflictTable::new(),
        })
    }

    /// Reduce a point into the fundamental cell, coefficients in [0,1).
    fn reduce(&self, p: &PlanarPoint) -> PlanarPoint {
        let fp = FramePoint::from_planar(p);
        let d = self.det.to_f64();
        let a = ((fp.x * self.f2.y - fp.y * self.f2.x).to_f64() / d).floor() as i64;
        let b = ((self.f1.x * fp.y - self.f1.y * fp.x).to_f64() / d).floor() as i64;
        let mut q = p.sub(&shift_by(&self.t1, a)).sub(&shift_by(&self.t2, b));
        for _ in 0..4 {
            let fq = FramePoint::from_planar(&q);
            let qa = (fq.x * self.f2.y - fq.y * self.f2.x) / self.det;
            let qb = (self.f1.x * fq.y - self.f1.y * fq.x) / self.det;
            use crate::golden::GoldenNum as G;
            let da = if qa < G::ZERO { -1 } else if qa >= G::ONE { 1 } else { 0 };
            let db = if qb < G::ZERO { -1 } else if qb >= G::ONE { 1 } else { 0 };
            if da == 0 && db == 0 {
                break;
            }
            q = q.sub(&shift_by(&self.t1, da)).sub(&shift_by(&self.t2, db));
        }
        q
    }

    fn is_central(&mut self, v: &PlanarPoint) -> bool {
        if let Some(&c) = self.central_cache.get(v) {
            return c;
        }
        let c = self.reduce(v) == *v;
        self.central_cache.insert(*v, c);
        c
    }

    fn bucket_of(t: &RhombusTile) -> (i64, i64) {
        let (x, y) = FramePoint::from_planar(&t.anchor).to_f64();
        ((x / 4.0).floor() as i64, (y / 4.0).floor() as i64)
    }

    /// Adds a reduced tile and its 3×3 translates. Returns false (after
    /// rolling back) when a conflict or an illegal completed star arises.
    fn push_tile(&mut self, reduced: &RhombusTile) -> bool {
        let mut placed: Vec<RhombusTile> = Vec::with_capacity(9);
        let mut ok = true;
        'place: for a in -1i64..=1 {
            for b in -1i64..=1 {
                let shift = shift_by(&self.t1, a).add(&shift_by(&self.t2, b));
                let tt = reduced.translate(&shift);
                if self.hood.contains(&tt) {
                    ok = false;
                    break 'place;
                }
                // conflicts against nearby existing tiles
                let (bx, by) = Self::bucket_of(&tt);
                let mut nearby: Vec<RhombusTile> = Vec::new();
                for dx in -1..=1 {
                    for dy in -1..=1 {
                        if let Some(cands) = self.buckets.get(&(bx + dx, by + dy)) {
                            nearby.extend(cands.iter().copied());
                        }
                    }
                }
                for u in &nearby {
                    if self.conflicts.conflict(&tt, u) {
                        ok = false;
                        break 'place;
                    }
                }
                self.hood.insert(tt);
                self.buckets.entry((bx, by)).or_default().push(tt);
                for (ci, c) in tt.corners().iter().enumerate() {
                    let ang = self.angle.entry(*c).or_insert(0);
                    *ang += tt.corner_angles()[ci] as u32;
                    if *ang > 10 {
                        ok = false;
                    }
                    self.at.entry(*c).or_default().push(tt);
                }
                for (x, y) in tt.edges() {
                    *self.edge_cnt.entry(edge_key(x, y)).or_insert(0) += 1;
                }
                placed.push(tt);
                if !ok {
                    break 'place;
                }
            }
        }
        if ok {
            // book-keep central vertices; check stars that just completed
            for tt in &placed {
                for c in tt.corners() {
                    if !self.is_central(&c) {
                        continue;
                    }
                    let ang = self.angle[&c];
                    if ang < 10 {
                        self.incomplete.insert(c);
                    } else {
                        self.incomplete.remove(&c);
                        if !self.skip_legality && !self.star_is_legal(&c) {
                            ok = false;
                        }
                    }
                }
                if !ok {
                    break;
                }
            }
        }
        if !ok {
            for tt in placed.iter().rev() {
                self.remove_tile_bookkeeping(tt);
            }
            // incomplete set may be stale; rebuild lazily below
            self.rebuild_incomplete();
            return false;
        }
        self.fundamental.push(*reduced);
        true
    }

    fn remove_tile_bookkeeping(&mut self, tt: &RhombusTile) {
        self.hood.remove(tt);
        let b = Self::bucket_of(tt);
        if let Some(v) = self.buckets.get_mut(&b) {
            v.retain(|x| x != tt);
        }
        for (ci, c) in tt.corners().iter().enumerate() {
            if let Some(a) = self.angle.get_mut(c) {
                *a = a.saturating_sub(tt.corner_angles()[ci] as u32);
            }
            if let Some(v) = self.at.get_mut(c) {
                v.retain(|x| x != tt);
            }
        }
        for (x, y) in tt.edges() {
            if let Some(n) = self.edge_cnt.get_mut(&edge_key(x, y)) {
                *n -= 1;
            }
        }
    }

    fn pop_tile(&mut self) {
        let reduced = self.fundamental.pop().expect("pop on empty state");
        for a in -1i64..=1 {
            for b in -1i64..=1 {
                let shift = shift_by(&self.t1, a).add(&shift_by(&self.t2, b));
                let tt = reduced.translate(&shift);
                self.remove_tile_bookkeeping(&tt);
            }
        }
        self.rebuild_incomplete();
    }

    fn rebuild_incomplete(&mut self) {
        let keys: Vec<PlanarPoint> = self
            .angle
            .iter()
            .filter(|(_, &a)| a > 0 && a < 10)
            .map(|(v, _)| *v)
            .collect();
        self.incomplete.clear();
        for v in keys {
            if self.is_central(&v) {
                self.incomplete.insert(v);
            }
        }
    }

    fn star_is_legal(&self, v: &PlanarPoint) -> bool {
        let tiles = self.at[v].clone();
        let km = KMap {
            center: *v,
            tiles,
            k: 0,
        };
        let c = km.canonical(EquivMode::Isometry);
        self.star_keys.contains(&c.tiles)
    }

    fn recurse(&mut self) -> bool {
        if self.budget == 0 {
            return false;
        }
        self.budget -= 1;
        if self.fundamental.len() > 40 {
            return false;
        }
        // most constrained incomplete central vertex
        let Some(v) = self
            .incomplete
            .iter()
            .max_by_key(|v| self.angle.get(v).copied().unwrap_or(0))
            .copied()
        else {
            return !self.fundamental.is_empty();
        };
        // compositional prune
        let mut partial: Vec<u8> = self.at[&v]
            .iter()
            .map(|t| {
                let cs = t.corners();
                let ci = cs.iter().position(|c| *c == v).unwrap();
                t.corner_angles()[ci]
            })
            .collect();
        partial.sort_unstable();
        if !self
            .star_multisets
            .iter()
            .any(|m| is_submultiset(&partial, m))
        {
            return false;
        }
        // a free edge at v
        let Some((a_, b_)) = self.at[&v]
            .iter()
            .flat_map(|t| t.edges())
            .filter(|(x, y)| {
                (*x == v || *y == v) && self.edge_cnt.get(&edge_key(*x, *y)) == Some(&1)
            })
            .map(|(x, y)| edge_key(x, y))
            .min()
        else {
            return false;
        };
        let other = if a_ == v { b_ } else { a_ };
        let Some(dv) = (0..10u8).find(|&d| other.sub(&v) == direction(d)) else {
            return false;
        };
        for t in candidate_tiles_on_edge(&v, dv) {
            if self.hood.contains(&t) {
                continue;
            }
            let red_anchor = self.reduce(&t.anchor);
            let delta = red_anchor.sub(&t.anchor);
            let reduced = t.translate(&delta);
            if !self.push_tile(&reduced) {
                continue;
            }
            if self.recurse() {
                return true;
            }
            self.pop_tile();
        }
        false
    }
}

/// All placements of a tile having a corner at `v` and an edge along
/// direction `dv` from `v`.
fn candidate_tiles_on_edge(v: &PlanarPoint, dv: u8) -> Vec<RhombusTile> {
    let mut out = Vec::new();
    for shape in [Shape::Fat, Shape::Thin] {
        let s = shape.spread();
        // (corner index, orientation) pairs whose corner edge runs along dv
        let combos = [
            (0usize, dv),
            (0, (dv + 10 - s) % 10),
            (1, (dv + 5) % 10),
            (1, (dv + 10 - s) % 10),
            (2, (dv + 5 + 10 - s) % 10),
            (2, (dv + 5) % 10),
            (3, dv),
            (3, (dv + 5 + 10 - s) % 10),
        ];
        for (corner, o) in combos {
            let probe = RhombusTile {
                shape,
                anchor: PlanarPoint::ORIGIN,
                orient: o % 10,
                mark: None,
            };
            let offset = probe.corners()[corner];
            let t = RhombusTile::new(shape, v.sub(&offset), o % 10, None);
            let has_edge = t
                .edges()
                .iter()
                .any(|(x, y)| edge_key(*x, *y) == edge_key(*v, v.add(&direction(dv))));
            if has_edge && !out.contains(&t) {
                out.push(t);
            }
        }
    }
    out
}

fn is_submultiset(sub: &[u8], sup: &[u8]) -> bool {
    let mut it = sup.iter();
    'outer: for s in sub {
        for x in it.by_ref() {
            if x == s {
                continue 'outer;
            }
        }
        return false;
    }
    true
}


/// Test hooks.
pub fn debug_candidate_periods() -> Vec<(PlanarPoint, PlanarPoint)> {
    candidate_periods()
}

pub fn debug_torus_search(
    t1: &PlanarPoint,
    t2: &PlanarPoint,
    atlases: &PenroseAtlases,
    budget: usize,
) -> Option<Vec<RhombusTile>> {
    let star_multisets = star_angle_multisets(atlases);
    torus_search(t1, t2, atlases, &star_multisets, budget)
}

/// Test hook: torus search from explicit seed tiles.
pub fn debug_torus_search_seeded(
    t1: &PlanarPoint,
    t2: &PlanarPoint,
    atlases: &PenroseAtlases,
    seed: &[RhombusTile],
    budget: usize,
) -> Option<Vec<RhombusTile>> {
    let star_multisets = star_angle_multisets(atlases);
    let mut st = TorusState::new(t1, t2, atlases, &star_multisets, budget)?;
    for t in seed {
        let red_anchor = st.reduce(&t.anchor);
        let delta = red_anchor.sub(&t.anchor);
        let reduced = t.translate(&delta);
        if !st.push_tile(&reduced) {
            return None;
        }
    }
    if st.recurse() {
        Some(st.fundamental)
    } else {
        None
    }
}

/// Test hook: torus filler without the atlas-legality constraint.
pub fn debug_torus_fill_any(
    t1: &PlanarPoint,
    t2: &PlanarPoint,
    atlases: &PenroseAtlases,
    budget: usize,
) -> Option<Vec<RhombusTile>> {
    let all: Vec<Vec<u8>> = vec![vec![4u8; 10]]; // permissive multiset prune
    let mut st = TorusState::new(t1, t2, atlases, &all, budget)?;
    st.skip_legality = true;
    let first = RhombusTile::new(Shape::Fat, PlanarPoint::ORIGIN, 0, None);
    if !st.push_tile(&first) {
        return None;
    }
    if st.recurse() {
        Some(st.fundamental)
    } else {
        None
    }
}

fn star_angle_multisets(atlases: &PenroseAtlases) -> Vec<Vec<u8>> {
    atlases
        .geometric0
        .entries
        .iter()
        .map(|e| {
            let p = e.to_patch();
            let mut a: Vec<u8> = p
                .tiles_at(&PlanarPoint::ORIGIN)
                .map(|t| {
                    let cs = t.corners();
                    let ci = cs.iter().position(|c| *c == PlanarPoint::ORIGIN).unwrap();
                    t.corner_angles()[ci]
                })
                .collect();
            a.sort_unstable();
            a
        })
        .collect()
}
