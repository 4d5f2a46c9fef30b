//! Cut-and-project machinery: the rhombic-icosahedron window, B/V sets,
//! k-regions, the deterministic subdivision of the window into cells of
//! constant k-map, the Penrose plane sections and exact pattern
//! frequencies.
//!
//! Internal coordinates are (s, p₁, p₂): s is the coordinate sum, p₂ is
//! measured in units of sin π/5, so every computation stays in Q(φ).
//! Frequencies and volume identities are ratios, hence independent of
//! that scaling.

use std::collections::HashMap;

use crate::golden::GoldenNum;
use crate::lattice::{internal_project, InternalPoint, LatticePoint, PlanarPoint, ProjectionScheme};
use crate::patch::{EquivMode, KMap, Patch};
use crate::polytope::{cell_from_halfspaces, ConvexCell3, HalfSpace3, Poly2, Vec3G};
use crate::tile::{RhombusTile, Shape};
use crate::{Error, Result};

pub fn internal_to_vec(p: &InternalPoint) -> Vec3G {
    Vec3G::new(p.s, p.p1, p.p2)
}

/// The window W = π′([0,1]⁵) with exact facet description and face
/// structure.
#[derive(Clone, Debug)]
pub struct Window {
    pub generators: [Vec3G; 5],
    pub facets: Vec<HalfSpace3>,
    pub cell: ConvexCell3,
}

/// Exact window of a scheme: for the Penrose slope a rhombic icosahedron
/// (20 facets, 22 vertices).
pub fn compute_window(scheme: &ProjectionScheme) -> Result<Window> {
    scheme.check_nondegenerate()?;
    let mut generators = [Vec3G::ZERO; 5];
    for k in 0..5 {
        generators[k] = Vec3G::new(
            scheme.internal_basis[0][k],
            scheme.internal_basis[1][k],
            scheme.internal_basis[2][k],
        );
    }
    // zonotope facets: normals g_i × g_j, support h(n) = Σ max(0, n·g_k)
    let mut facets: Vec<HalfSpace3> = Vec::new();
    for i in 0..5 {
        for j in i + 1..5 {
            let n = generators[i].cross(&generators[j]);
            if n.is_zero() {
                return Err(Error::DegenerateScheme);
            }
            for n in [n, Vec3G::ZERO.sub(&n)] {
                let mut c = GoldenNum::ZERO;
                for g in &generators {
                    let d = n.dot(g);
                    if d.signum() > 0 {
                        c += d;
                    }
                }
                let h = HalfSpace3 { n, c }.canonical();
                if !facets.contains(&h) {
                    facets.push(h);
                }
            }
        }
    }
    let bounds = ConvexCell3::cuboid(
        &Vec3G::new(
            GoldenNum::from_int(-1),
            GoldenNum::from_int(-5),
            GoldenNum::from_int(-5),
        ),
        &Vec3G::new(
            GoldenNum::from_int(6),
            GoldenNum::from_int(5),
            GoldenNum::from_int(5),
        ),
    );
    let cell = cell_from_halfspaces(&bounds, &facets)?;
    let w = Window {
        generators,
        facets,
        cell,
    };
    // the generators' cube corners must all lie inside
    for corner in 0..32u32 {
        let mut p = Vec3G::ZERO;
        for (k, g) in w.generators.iter().enumerate() {
            if corner & (1 << k) != 0 {
                p = p.add(g);
            }
        }
        if !w.contains(&p) {
            return Err(Error::DegenerateScheme);
        }
    }
    Ok(w)
}

impl Window {
    pub fn contains(&self, p: &Vec3G) -> bool {
        self.facets.iter().all(|h| h.side(p) <= 0)
    }

    pub fn contains_strict(&self, p: &Vec3G) -> bool {
        self.facets.iter().all(|h| h.side(p) < 0)
    }

    /// Is p on the boundary of the translate W + shift?
    fn on_translate_boundary(&self, p: &Vec3G, shift: &Vec3G) -> bool {
        let q = p.sub(shift);
        self.facets.iter().any(|h| h.side(&q) == 0) && self.contains(&q)
    }

    pub fn internal_of(&self, v: &LatticePoint) -> Vec3G {
        internal_to_vec(&internal_project(v))
    }

    pub fn volume(&self) -> GoldenNum {
        self.cell.volume()
    }
}

/// Integer points of 1-norm ≤ k.
pub fn ball1(k: u32) -> Vec<LatticePoint> {
    let k = k as i64;
    let mut out = Vec::new();
    for a in -k..=k {
        for b in -k..=k {
            for c in -k..=k {
                for d in -k..=k {
                    let used = a.abs() + b.abs() + c.abs() + d.abs();
                    if used > k {
                        continue;
                    }
                    let rem = k - used;
                    for e in -rem..=rem {
                        out.push([a, b, c, d, e]);
                    }
                }
            }
        }
    }
    out.sort();
    out
}

/// B(x′,k): lattice points of 1-norm at most k whose internal shift stays
/// in the window.
pub fn b_set(window: &Window, x: &Vec3G, k: u32) -> Vec<LatticePoint> {
    ball1(k)
        .into_iter()
        .filter(|u| window.contains(&x.add(&window.internal_of(u))))
        .collect()
}

/// V(x′,k): the vertex set of the k-map at x′ — points of B(x′,k+2) with
/// at least two neighbours in B(x′,k+1).
pub fn v_set(window: &Window, x: &Vec3G, k: u32) -> Vec<LatticePoint> {
    let b2 = b_set(window, x, k + 2);
    let b1: std::collections::HashSet<LatticePoint> =
        b_set(window, x, k + 1).into_iter().collect();
    b2.into_iter()
        .filter(|u| {
            let mut neighbours = 0;
            for axis in 0..5 {
                for dir in [-1i64, 1] {
                    let mut v = *u;
                    v[axis] += dir;
                    if b1.contains(&v) {
                        neighbours += 1;
                    }
                }
            }
            neighbours >= 2
        })
        .collect()
}

/// The selected unit 2-faces forming the k-map at internal point x:
/// faces whose four corners project into the window, with at least one
/// corner at 1-norm ≤ k. `label_offset` as in [`face_to_tile`].
pub fn tiles_at_internal(
    window: &Window,
    x: &Vec3G,
    k: u32,
    label_offset: Option<i64>,
) -> Vec<RhombusTile> {
    let mut tiles = Vec::new();
    let member = |u: &LatticePoint| window.contains(&x.add(&window.internal_of(u)));
    for v in ball1(k + 2) {
        for i in 0..5usize {
            for j in i + 1..5 {
                let mut c1 = v;
                c1[i] += 1;
                let mut c2 = v;
                c2[j] += 1;
                let mut c3 = v;
                c3[i] += 1;
                c3[j] += 1;
                let corners = [v, c1, c2, c3];
                let norms: Vec<i64> = corners
                    .iter()
                    .map(|c| c.iter().map(|x| x.abs()).sum())
                    .collect();
                if !norms.iter().any(|&n| n <= k as i64) {
                    continue;
                }
                if corners.iter().all(member) {
                    tiles.push(face_to_tile(&v, i, j, label_offset));
                }
            }
        }
    }
    tiles.sort();
    tiles.dedup();
    tiles
}

/// The internal point of a canonical lift (sum in 0..5), placed in the
/// window: the realized planes sit at levels (sum + 1), so levels 1–4
/// pass through the window vertices exactly as the Penrose intercept
/// demands.
pub fn lift_to_window(lift: &LatticePoint) -> Vec3G {
    let p = internal_project(lift);
    Vec3G::new(p.s + GoldenNum::ONE, p.p1, p.p2)
}

/// Converts a selected 2-face (base point, axes i<j) to a placed tile.
/// `label_offset`: when set, absolute lift sums are offset + Σv and the
/// Penrose marked corner is derived from them.
pub fn face_to_tile(
    v: &LatticePoint,
    i: usize,
    j: usize,
    label_offset: Option<i64>,
) -> RhombusTile {
    let base = PlanarPoint::new(*v);
    let diff = (j - i) % 5;
    let (shape, anchor, orient) = match diff {
        1 => (Shape::Fat, base, (2 * i as u8) % 10),
        4 => {
            // pair (i, i+4) = (j, j+1) from base
            (Shape::Fat, base, (2 * j as u8) % 10)
        }
        2 => {
            let mut a = *v;
            a[i] += 1;
            (Shape::Thin, PlanarPoint::new(a), (2 * j as u8) % 10)
        }
        _ => {
            // diff == 3: pair (i, i+3) = (j, j+2) from base
            let mut a = *v;
            a[j] += 1;
            (Shape::Thin, PlanarPoint::new(a), (2 * i as u8) % 10)
        }
    };
    let mark = label_offset.map(|off| {
        // corner sums: base s, far s+2 (the sharp pair for fat, the
        // obtuse pair for thin). The marked corner is the one whose
        // absolute sum ≡ 0 or 3 (mod 5) — the outermost realized planes.
        let s = (off + v.iter().sum::<i64>()).rem_euclid(5);
        let mark_base = s == 0 || s == 3;
        let far = {
            let mut f = *v;
            f[i] += 1;
            f[j] += 1;
            PlanarPoint::new(f)
        };
        let target = if mark_base { base } else { far };
        let probe = RhombusTile::new(shape, anchor, orient, Some(false));
        probe.marked_corner() != Some(target)
    });
    RhombusTile::new(shape, anchor, orient, mark)
}

/// A k-region: the intersection of window translates over the V set.
#[derive(Clone, Debug)]
pub struct Region {
    pub cell: ConvexCell3,
    pub v_set: Vec<LatticePoint>,
    pub k: u32,
}

/// R(x′,k) = ∩_{u ∈ V(x′,k)} (W − π′u). Errors with `BoundaryPoint` when
/// x′ lies on a shifted facet (non-generic).
pub fn region_of(window: &Window, x: &Vec3G, k: u32) -> Result<Region> {
    for u in ball1(k + 2) {
        let shift = window.internal_of(&u);
        if window.on_translate_boundary(x, &Vec3G::ZERO.sub(&shift)) {
            return Err(Error::BoundaryPoint);
        }
    }
    let vs = v_set(window, x, k);
    let mut cell = window.cell.clone();
    for u in &vs {
        let shift = window.internal_of(u);
        for f in &window.facets {
            let h = HalfSpace3 {
                n: f.n,
                c: f.c - f.n.dot(&shift),
            };
            cell = cell
                .clip(&h)
                .ok_or_else(|| Error::InvalidPatch("empty region".into()))?;
        }
    }
    Ok(Region {
        cell,
        v_set: vs,
        k,
    })
}

/// One class of the region subdivision: a k-map pattern together with its
/// region and the exact measure of its cells.
#[derive(Clone, Debug)]
pub struct RegionClass {
    /// Translation-canonical unlabelled k-map.
    pub kmap: KMap,
    pub region: ConvexCell3,
    pub volume: GoldenNum,
    pub cells: usize,
}

#[derive(Clone, Debug)]
pub struct RegionAtlas {
    pub k: u32,
    pub classes: Vec<RegionClass>,
    pub window_volume: GoldenNum,
    pub covered_volume: GoldenNum,
}

impl RegionAtlas {
    pub fn translation_count(&self) -> usize {
        self.classes.len()
    }

    /// Number of classes after reducing by the isometry group.
    pub fn isometry_count(&self) -> usize {
        let mut keys: Vec<Vec<RhombusTile>> = self
            .classes
            .iter()
            .map(|c| c.kmap.canonical(EquivMode::Isometry).tiles)
            .collect();
        keys.sort();
        keys.dedup();
        keys.len()
    }
}

/// Deterministic subdivision of the window into cells of constant k-map:
/// the overlay of all window translates W − π′u for ‖u‖₁ ≤ k+2, cells
/// grouped by their pattern. Replaces the random sampling loop of the
/// region algorithm with exhaustive cell enumeration.
pub fn atlas_by_regions(scheme: &ProjectionScheme, k: u32) -> Result<RegionAtlas> {
    let window = compute_window(scheme)?;
    let shifts: Vec<(LatticePoint, Vec3G)> = relevant_shifts(&window, k + 2);

    struct OverlayCell {
        cell: ConvexCell3,
        membership: Vec<bool>,
        bbox: [(f64, f64); 3],
    }
    let bbox_of = |c: &ConvexCell3| -> [(f64, f64); 3] {
        let mut bb = [(f64::INFINITY, f64::NEG_INFINITY); 3];
        for v in &c.verts {
            for (axis, val) in [v.x, v.y, v.z].into_iter().enumerate() {
                let f = val.to_f64();
                bb[axis].0 = bb[axis].0.min(f - 1e-9);
                bb[axis].1 = bb[axis].1.max(f + 1e-9);
            }
        }
        bb
    };

    let mut cells = vec![OverlayCell {
        cell: window.cell.clone(),
        membership: Vec::new(),
        bbox: bbox_of(&window.cell),
    }];

    for (_u, shift) in &shifts {
        // bounding box of the translate
        let translate_facets: Vec<HalfSpace3> = window
            .facets
            .iter()
            .map(|f| HalfSpace3 {
                n: f.n,
                c: f.c + f.n.dot(shift),
            })
            .collect();
        let tb = {
            let mut bb = [(f64::INFINITY, f64::NEG_INFINITY); 3];
            for v in &window.cell.verts {
                let p = v.add(shift);
                for (axis, val) in [p.x, p.y, p.z].into_iter().enumerate() {
                    let f = val.to_f64();
                    bb[axis].0 = bb[axis].0.min(f - 1e-9);
                    bb[axis].1 = bb[axis].1.max(f + 1e-9);
                }
            }
            bb
        };
        let mut next: Vec<OverlayCell> = Vec::with_capacity(cells.len() + 16);
        for oc in cells {
            // fast box rejection
            let disjoint = (0..3).any(|a| oc.bbox[a].1 < tb[a].0 || tb[a].1 < oc.bbox[a].0);
            if disjoint {
                let mut m = oc.membership;
                m.push(false);
                next.push(OverlayCell {
                    cell: oc.cell,
                    membership: m,
                    bbox: oc.bbox,
                });
                continue;
            }
            // exact classification
            let mut all_in = true;
            let mut any_separating = false;
            for h in &translate_facets {
                let mut pos = 0;
                let mut neg = 0;
                for v in &oc.cell.verts {
                    match h.side(v) {
                        1 => pos += 1,
                        -1 => neg += 1,
                        _ => {}
                    }
                }
                if pos > 0 {
                    all_in = false;
                }
                if neg == 0 && pos > 0 {
                    any_separating = true;
                    break;
                }
            }
            if any_separating {
                let mut m = oc.membership;
                m.push(false);
                next.push(OverlayCell {
                    cell: oc.cell,
                    membership: m,
                    bbox: oc.bbox,
                });
                continue;
            }
            if all_in {
                let mut m = oc.membership;
                m.push(true);
                next.push(OverlayCell {
                    cell: oc.cell,
                    membership: m,
                    bbox: oc.bbox,
                });
                continue;
            }
            // genuine split: successive clipping against the facets,
            // emitting the outside piece at each step
            let mut rest = Some(oc.cell);
            for h in &translate_facets {
                let Some(cur) = rest.take() else { break };
                let (inside, outside) = cur.split(&h.n, &h.c);
                if let Some(out_piece) = outside {
                    let mut m = oc.membership.clone();
                    m.push(false);
                    let bb = bbox_of(&out_piece);
                    next.push(OverlayCell {
                        cell: out_piece,
                        membership: m,
                        bbox: bb,
                    });
                }
                rest = inside;
            }
            if let Some(inside) = rest {
                let mut m = oc.membership.clone();
                m.push(true);
                let bb = bbox_of(&inside);
                next.push(OverlayCell {
                    cell: inside,
                    membership: m,
                    bbox: bb,
                });
            }
        }
        cells = next;
        if std::env::var_os("PENROSE_DEBUG_OVERLAY").is_some() {
            eprintln!("shift {:?}: {} cells", _u, cells.len());
        }
    }

    // group cells by pattern
    let window_volume = window.volume();
    let mut covered = GoldenNum::ZERO;
    let mut classes: HashMap<Vec<RhombusTile>, RegionClass> = HashMap::new();
    for oc in &cells {
        let vol = oc.cell.volume();
        covered += vol;
        let x = oc.cell.centroid();
        let tiles = tiles_from_membership(&shifts, &oc.membership, k);
        let km = KMap {
            center: PlanarPoint::ORIGIN,
            tiles,
            k,
        }
        .canonical(EquivMode::Translation);
        match classes.get_mut(&km.tiles) {
            Some(c) => {
                c.volume += vol;
                c.cells += 1;
            }
            None => {
                let region = region_for_vset(&window, &v_set_from_membership(&shifts, &oc.membership, k));
                classes.insert(
                    km.tiles.clone(),
                    RegionClass {
                        kmap: km,
                        region,
                        volume: vol,
                        cells: 1,
                    },
                );
                let _ = x;
            }
        }
    }
    let mut classes: Vec<RegionClass> = classes.into_values().collect();
    classes.sort_by(|a, b| a.kmap.tiles.cmp(&b.kmap.tiles));
    Ok(RegionAtlas {
        k,
        classes,
        window_volume,
        covered_volume: covered,
    })
}

/// Window translates that actually meet the window: u with π′u in W − W.
fn relevant_shifts(window: &Window, norm: u32) -> Vec<(LatticePoint, Vec3G)> {
    let mut out = Vec::new();
    for u in ball1(norm) {
        if u == [0; 5] {
            // trivially W itself; keep it so memberships line up with B sets
            out.push((u, Vec3G::ZERO));
            continue;
        }
        let s = window.internal_of(&u);
        // s ∈ W − W ⟺ for every facet n·x ≤ c: n·s ≤ c − min(n·W)
        let inside = window.facets.iter().all(|h| {
            let mut min_nw = GoldenNum::ZERO;
            for g in &window.generators {
                let d = h.n.dot(g);
                if d.signum() < 0 {
                    min_nw += d;
                }
            }
            (h.n.dot(&s) - (h.c - min_nw)).signum() <= 0
        });
        if inside {
            out.push((u, s));
        }
    }
    out
}

fn membership_map(
    shifts: &[(LatticePoint, Vec3G)],
    membership: &[bool],
) -> HashMap<LatticePoint, bool> {
    shifts
        .iter()
        .zip(membership)
        .map(|((u, _), &m)| (*u, m))
        .collect()
}

fn v_set_from_membership(
    shifts: &[(LatticePoint, Vec3G)],
    membership: &[bool],
    k: u32,
) -> Vec<LatticePoint> {
    let m = membership_map(shifts, membership);
    let in_b = |u: &LatticePoint, bound: i64| -> bool {
        u.iter().map(|c| c.abs()).sum::<i64>() <= bound && m.get(u).copied().unwrap_or(false)
    };
    let mut vs = Vec::new();
    for (u, _) in shifts {
        if !in_b(u, (k + 2) as i64) {
            continue;
        }
        let mut neighbours = 0;
        for axis in 0..5 {
            for dir in [-1i64, 1] {
                let mut v = *u;
                v[axis] += dir;
                if in_b(&v, (k + 1) as i64) {
                    neighbours += 1;
                }
            }
        }
        if neighbours >= 2 {
            vs.push(*u);
        }
    }
    vs
}

fn tiles_from_membership(
    shifts: &[(LatticePoint, Vec3G)],
    membership: &[bool],
    k: u32,
) -> Vec<RhombusTile> {
    let m = membership_map(shifts, membership);
    let member = |u: &LatticePoint| m.get(u).copied().unwrap_or(false);
    let mut tiles = Vec::new();
    for (v, _) in shifts {
        for i in 0..5usize {
            for j in i + 1..5 {
                let mut c1 = *v;
                c1[i] += 1;
                let mut c2 = *v;
                c2[j] += 1;
                let mut c3 = *v;
                c3[i] += 1;
                c3[j] += 1;
                let corners = [*v, c1, c2, c3];
                let min_norm: i64 = corners
                    .iter()
                    .map(|c| c.iter().map(|x| x.abs()).sum::<i64>())
                    .min()
                    .unwrap();
                if min_norm > k as i64 {
                    continue;
                }
                if corners.iter().all(|c| member(c)) {
                    tiles.push(face_to_tile(v, i, j, None));
                }
            }
        }
    }
    tiles.sort();
    tiles.dedup();
    tiles
}

fn region_for_vset(window: &Window, vs: &[LatticePoint]) -> ConvexCell3 {
    let mut cell = window.cell.clone();
    for u in vs {
        let shift = window.internal_of(u);
        for f in &window.facets {
            let h = HalfSpace3 {
                n: f.n,
                c: f.c - f.n.dot(&shift),
            };
            if let Some(c) = cell.clip(&h) {
                cell = c;
            }
        }
    }
    cell
}

/// A plane section of the window at an integer coordinate-sum level,
/// with its 2D (p₁, p₂) polygon.
#[derive(Clone, Debug)]
pub struct PlaneSection {
    pub level: i64,
    pub polygon: Poly2,
}

/// The interior integer-level sections of the window (levels 1..=4 for
/// the Penrose scheme; levels 0 and 5 meet W in single vertices).
pub fn plane_sections(window: &Window) -> Vec<PlaneSection> {
    let n = Vec3G::new(GoldenNum::ONE, GoldenNum::ZERO, GoldenNum::ZERO);
    let mut out = Vec::new();
    for level in 0..=5i64 {
        let c = GoldenNum::from_int(level);
        if let Some(pts) = window.cell.section(&n, &c) {
            let poly = Poly2::new(pts.iter().map(|p| (p.y, p.z)).collect());
            if !poly.area2().is_zero() {
                out.push(PlaneSection {
                    level,
                    polygon: poly,
                });
            }
        }
    }
    out
}

/// One class of the section subdivision.
#[derive(Clone, Debug)]
pub struct SectionClass {
    /// Translation-canonical k-map (labelled when requested).
    pub kmap: KMap,
    /// Twice the total section area of its cells.
    pub area2: GoldenNum,
    pub cells: usize,
}

#[derive(Clone, Debug)]
pub struct SectionAtlas {
    pub k: u32,
    pub labelled: bool,
    pub classes: Vec<SectionClass>,
    /// Twice the total area of the sections.
    pub total_area2: GoldenNum,
}

impl SectionAtlas {
    pub fn translation_count(&self) -> usize {
        self.classes.len()
    }

    pub fn isometry_count(&self) -> usize {
        let mut keys: Vec<Vec<RhombusTile>> = self
            .classes
            .iter()
            .map(|c| c.kmap.canonical(EquivMode::Isometry).tiles)
            .collect();
        keys.sort();
        keys.dedup();
        keys.len()
    }

    /// Exact frequency of each isometry class: section area ratio summed
    /// over the class orbit. Frequencies sum to 1.
    pub fn frequencies(&self) -> Vec<(KMap, GoldenNum)> {
        let mut acc: HashMap<Vec<RhombusTile>, (KMap, GoldenNum)> = HashMap::new();
        for c in &self.classes {
            let iso = c.kmap.canonical(EquivMode::Isometry);
            let e = acc
                .entry(iso.tiles.clone())
                .or_insert_with(|| (iso.clone(), GoldenNum::ZERO));
            e.1 += c.area2;
        }
        let mut out: Vec<(KMap, GoldenNum)> = acc
            .into_values()
            .map(|(km, a)| (km, a / self.total_area2))
            .collect();
        out.sort_by(|a, b| a.0.tiles.cmp(&b.0.tiles));
        out
    }

    /// The atlas as a plain set of canonical k-maps (isometry mode).
    pub fn to_atlas(&self, mode: EquivMode) -> crate::patch::Atlas {
        crate::patch::Atlas::from_kmaps(self.k, mode, self.classes.iter().map(|c| c.kmap.clone()))
    }
}

/// The Penrose atlas by plane sections: subdivides each interior section
/// by the boundaries of the window translates and reads one k-map per 2D
/// cell. Only regions meeting the sections with positive area are
/// produced.
pub fn penrose_atlas_by_sections(
    scheme: &ProjectionScheme,
    k: u32,
    label: bool,
) -> Result<SectionAtlas> {
    if !scheme.is_penrose_mode() {
        return Err(Error::PreconditionViolated(
            "plane sections need an integer intercept".into(),
        ));
    }
    let window = compute_window(scheme)?;
    let sections = plane_sections(&window);
    let shifts = relevant_shifts(&window, k + 2);
    // per-level section polygons of the window, indexed by level
    let mut level_poly: HashMap<i64, Poly2> = HashMap::new();
    for s in &sections {
        level_poly.insert(s.level, s.polygon.clone());
    }

    let mut total_area2 = GoldenNum::ZERO;
    let mut classes: HashMap<Vec<RhombusTile>, SectionClass> = HashMap::new();

    for section in &sections {
        total_area2 += section.polygon.area2();
        let mut cells = vec![Cell2 {
            poly: section.polygon.clone(),
            membership: Vec::new(),
        }];
        for (u, shift) in &shifts {
            let s_u: i64 = u.iter().sum();
            // x + π′u lies in W iff the (p₁,p₂) part lies in the section
            // of W at level (level + s_u), shifted by −p(u)
            let target = level_poly.get(&(section.level + s_u));
            let mut next = Vec::with_capacity(cells.len() + 8);
            match target {
                None => {
                    for mut c in cells {
                        c.membership.push(false);
                        next.push(c);
                    }
                }
                Some(tp) => {
                    // shifted polygon edges as half-planes
                    let shifted: Vec<(GoldenNum, GoldenNum)> = tp
                        .verts
                        .iter()
                        .map(|(x, y)| (*x - shift.y, *y - shift.z))
                        .collect();
                    let tpoly = Poly2 { verts: shifted };
                    for c in cells {
                        next.extend(split_cell2(c, &tpoly));
                    }
                }
            }
            cells = next;
        }
        for c in &cells {
            // absolute lift sums at this level are level − 1 + Σu
            let offset = if label { Some(section.level - 1) } else { None };
            let tiles = penrose_tiles_from_membership(&shifts, &c.membership, offset, k);
            let km = KMap {
                center: PlanarPoint::ORIGIN,
                tiles,
                k,
            }
            .canonical(EquivMode::Translation);
            match classes.get_mut(&km.tiles) {
                Some(e) => {
                    e.area2 += c.poly.area2();
                    e.cells += 1;
                }
                None => {
                    classes.insert(
                        km.tiles.clone(),
                        SectionClass {
                            kmap: km,
                            area2: c.poly.area2(),
                            cells: 1,
                        },
                    );
                }
            }
        }
    }
    let mut classes: Vec<SectionClass> = classes.into_values().collect();
    classes.sort_by(|a, b| a.kmap.tiles.cmp(&b.kmap.tiles));
    Ok(SectionAtlas {
        k,
        labelled: label,
        classes,
        total_area2,
    })
}

struct Cell2 {
    poly: Poly2,
    membership: Vec<bool>,
}

/// Splits a 2D overlay cell against a translate polygon: outside pieces
/// get membership false, the residual intersection gets true.
fn split_cell2(c: Cell2, tpoly: &Poly2) -> Vec<Cell2> {
    // edge half-planes of the (counterclockwise) translate polygon:
    // interior is nx·x + ny·y ≤ cc with nx = dy, ny = −dx
    let n = tpoly.verts.len();
    let mut halves: Vec<(GoldenNum, GoldenNum, GoldenNum)> = Vec::with_capacity(n);
    for i in 0..n {
        let (ax, ay) = tpoly.verts[i];
        let (bx, by) = tpoly.verts[(i + 1) % n];
        let dx = bx - ax;
        let dy = by - ay;
        let cc = dy * ax - dx * ay;
        halves.push((dy, -dx, cc));
    }
    // classify quickly
    let mut all_in = true;
    for (nx, ny, cc) in &halves {
        let mut pos = 0;
        let mut neg = 0;
        for (x, y) in &c.poly.verts {
            match (*nx * *x + *ny * *y - *cc).signum() {
                1 => pos += 1,
                -1 => neg += 1,
                _ => {}
            }
        }
        if pos > 0 {
            all_in = false;
        }
        if pos > 0 && neg == 0 {
            // separated by this edge line
            let mut m = c.membership;
            let mut out = Vec::with_capacity(1);
            m.push(false);
            out.push(Cell2 {
                poly: c.poly,
                membership: m,
            });
            return out;
        }
    }
    if all_in {
        let mut m = c.membership;
        m.push(true);
        return vec![Cell2 {
            poly: c.poly,
            membership: m,
        }];
    }
    let mut out = Vec::new();
    let mut rest = Some(c.poly);
    for (nx, ny, cc) in &halves {
        let Some(cur) = rest.take() else { break };
        let (inside, outside) = cur.split(nx, ny, cc);
        if let Some(o) = outside {
            let mut m = c.membership.clone();
            m.push(false);
            out.push(Cell2 {
                poly: o,
                membership: m,
            });
        }
        rest = inside;
    }
    if let Some(i) = rest {
        let mut m = c.membership.clone();
        m.push(true);
        out.push(Cell2 {
            poly: i,
            membership: m,
        });
    }
    out
}

fn penrose_tiles_from_membership(
    shifts: &[(LatticePoint, Vec3G)],
    membership: &[bool],
    label_offset: Option<i64>,
    k: u32,
) -> Vec<RhombusTile> {
    let m = membership_map(shifts, membership);
    let member = |u: &LatticePoint| m.get(u).copied().unwrap_or(false);
    let mut tiles = Vec::new();
    for (v, _) in shifts {
        for i in 0..5usize {
            for j in i + 1..5 {
                let mut c1 = *v;
                c1[i] += 1;
                let mut c2 = *v;
                c2[j] += 1;
                let mut c3 = *v;
                c3[i] += 1;
                c3[j] += 1;
                let corners = [*v, c1, c2, c3];
                let min_norm: i64 = corners
                    .iter()
                    .map(|c| c.iter().map(|x| x.abs()).sum::<i64>())
                    .min()
                    .unwrap();
                if min_norm > k as i64 {
                    continue;
                }
                if corners.iter().all(|c| member(c)) {
                    tiles.push(face_to_tile(v, i, j, label_offset));
                }
            }
        }
    }
    tiles.sort();
    tiles.dedup();
    tiles
}

/// Generates the canonical Penrose tiling by direct selection: lattice
/// faces whose corners all project into the (closed) window, restricted
/// to the disc of the given radius about the origin. Matches the
/// substitution fixpoint.
pub fn generate_penrose_patch(scheme: &ProjectionScheme, radius: GoldenNum) -> Result<Patch> {
    if !scheme.is_penrose_mode() {
        return Err(Error::PreconditionViolated(
            "direct generation needs an integer intercept".into(),
        ));
    }
    let window = compute_window(scheme)?;
    let r2 = {
        let r = radius + GoldenNum::from_int(2);
        r * r
    };
    // BFS over selected lattice points within the disc
    use std::collections::{HashSet, VecDeque};
    let selected = |v: &LatticePoint| -> bool { window.contains(&lift_to_window(v)) };
    let mut seen: HashSet<LatticePoint> = HashSet::new();
    let mut q: VecDeque<LatticePoint> = VecDeque::new();
    let origin = [0i64; 5];
    if !selected(&origin) {
        return Err(Error::PreconditionViolated("origin not selected".into()));
    }
    seen.insert(origin);
    q.push_back(origin);
    let mut points: Vec<LatticePoint> = vec![origin];
    while let Some(v) = q.pop_front() {
        for axis in 0..5 {
            for dir in [-1i64, 1] {
                let mut u = v;
                u[axis] += dir;
                // keep canonical lifts: sums stay within 0..=4
                let s: i64 = u.iter().sum();
                if !(0..5).contains(&s) || seen.contains(&u) {
                    continue;
                }
                let f = crate::lattice::FramePoint::from_lattice(&u);
                if f.norm2() > r2 || !selected(&u) {
                    continue;
                }
                seen.insert(u);
                points.push(u);
                q.push_back(u);
            }
        }
    }
    // faces with all corners selected
    let point_set: HashSet<LatticePoint> = points.iter().copied().collect();
    let mut tiles = Vec::new();
    let r2tile = {
        let r = radius + GoldenNum::ONE;
        r * r
    };
    for v in &points {
        for i in 0..5usize {
            for j in i + 1..5 {
                let mut c1 = *v;
                c1[i] += 1;
                let mut c2 = *v;
                c2[j] += 1;
                let mut c3 = *v;
                c3[i] += 1;
                c3[j] += 1;
                if [c1, c2, c3].iter().all(|c| point_set.contains(c)) {
                    let t = face_to_tile(v, i, j, Some(0));
                    if t.max_corner_dist2(&PlanarPoint::ORIGIN) <= r2tile {
                        tiles.push(t);
                    }
                }
            }
        }
    }
    Ok(Patch::from_tiles_unchecked(tiles))
}

/// Test hook.
pub fn debug_relevant_shifts(window: &Window, norm: u32) -> Vec<(LatticePoint, Vec3G)> {
    relevant_shifts(window, norm)
}
