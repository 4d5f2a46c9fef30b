//! The Penrose substitution σ.
//!
//! σ acts on Robinson half-tiles: the fat rhombus splits along its long
//! diagonal into two gnomons (apex 3π/5, unit legs, base φ), the thin one
//! along its short diagonal into two acute triangles (apex π/5, unit legs,
//! base φ−1). Each triangle is ordered (apex, b, c) where b is the base
//! vertex on the marked side of the parent rhombus; the pair ordering is
//! what the mirror-asymmetric decomposition step consumes.
//!
//! One step expands by φ (an exact lattice map) and subdivides; the cut
//! points sit on the c-side (the pairing bits below were fixed by
//! requiring boundary-only erosion, primitivity and the sun fixpoint):
//!
//!   acute (A,B,C)  →  gnomon(E; A, B), acute(B; C, E)        E = A+(C−A)/φ
//!   gnomon (A,B,C) →  gnomon(F; A, B), gnomon(E; C, F),      F = C+(B−C)/φ
//!                     acute(F; A, E)                          E = C+(A−C)/φ
//!
//! Triangles merge back into rhombi by pairing equal (kind, b, c) groups;
//! unpaired triangles sit on the patch boundary and are dropped.

use std::collections::HashMap;

use crate::golden::GoldenNum;
use crate::lattice::{direction, mul_phi_planar, FramePoint, PlanarPoint};
use crate::patch::{Atlas, EquivMode, KMap, Patch};
use crate::tile::{RhombusTile, Shape};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum HalfKind {
    /// Half of a fat rhombus: apex 3π/5, unit legs, base φ.
    Gnomon,
    /// Half of a thin rhombus: apex π/5, unit legs, base φ−1.
    Acute,
}

/// An ordered Robinson triangle. `b` is the base vertex adjacent to the
/// marked corner structure of the parent rhombus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct HalfTile {
    pub kind: HalfKind,
    pub apex: PlanarPoint,
    pub b: PlanarPoint,
    pub c: PlanarPoint,
}

impl HalfTile {
    pub fn vertices(&self) -> [PlanarPoint; 3] {
        [self.apex, self.b, self.c]
    }

    /// +1 for counterclockwise (apex, b, c), −1 clockwise.
    pub fn chirality(&self) -> i32 {
        let a = FramePoint::from_planar(&self.apex);
        let b = FramePoint::from_planar(&self.b);
        let c = FramePoint::from_planar(&self.c);
        let abx = b.x - a.x;
        let aby = b.y - a.y;
        let acx = c.x - a.x;
        let acy = c.y - a.y;
        (abx * acy - aby * acx).signum()
    }

    /// Direction index (mod 10) of the apex→b leg, or None if not a unit
    /// step.
    pub fn leg_direction(&self) -> Option<u8> {
        let d = self.b.sub(&self.apex);
        (0..10u8).find(|&i| direction(i) == d)
    }

    /// (kind, leg direction, chirality): the 40 half-tile placement
    /// classes up to translation.
    pub fn class(&self) -> (HalfKind, u8, i32) {
        (
            self.kind,
            self.leg_direction().expect("degenerate half-tile"),
            self.chirality(),
        )
    }
}

/// v/φ on reduced points, exact: v·(φ−1).
fn div_phi_planar(p: &PlanarPoint) -> PlanarPoint {
    mul_phi_planar(p).sub(p)
}

/// The two halves of a labelled rhombus. Unlabelled tiles cannot be
/// halved meaningfully: the decomposition is mirror-asymmetric.
pub fn halves_of_tile(t: &RhombusTile) -> Result<[HalfTile; 2]> {
    let m = t
        .marked_corner()
        .ok_or_else(|| Error::PreconditionViolated("substitution needs labelled tiles".into()))?;
    let corners = t.corners();
    match t.shape {
        Shape::Fat => {
            // halves share the long diagonal (the two sharp corners);
            // b = marked sharp corner
            let (marked, unmarked) = if m == corners[0] {
                (corners[0], corners[2])
            } else {
                (corners[2], corners[0])
            };
            Ok([
                HalfTile {
                    kind: HalfKind::Gnomon,
                    apex: corners[1],
                    b: marked,
                    c: unmarked,
                },
                HalfTile {
                    kind: HalfKind::Gnomon,
                    apex: corners[3],
                    b: marked,
                    c: unmarked,
                },
            ])
        }
        Shape::Thin => {
            // halves share the short diagonal (the two obtuse corners);
            // b = marked obtuse corner
            let (marked, unmarked) = if m == corners[1] {
                (corners[1], corners[3])
            } else {
                (corners[3], corners[1])
            };
            Ok([
                HalfTile {
                    kind: HalfKind::Acute,
                    apex: corners[0],
                    b: marked,
                    c: unmarked,
                },
                HalfTile {
                    kind: HalfKind::Acute,
                    apex: corners[2],
                    b: marked,
                    c: unmarked,
                },
            ])
        }
    }
}

/// The Penrose substitution rule: expansion factor φ, decomposition as in
/// the module docs.
#[derive(Clone, Copy, Debug, Default)]
pub struct SubstitutionRule;

impl SubstitutionRule {
    pub fn penrose() -> SubstitutionRule {
        SubstitutionRule
    }

    pub fn expansion(&self) -> GoldenNum {
        GoldenNum::PHI
    }

    /// One substitution step on a single triangle (expand then subdivide).
    pub fn substitute_half(&self, t: &HalfTile) -> Vec<HalfTile> {
        let a = mul_phi_planar(&t.apex);
        let b = mul_phi_planar(&t.b);
        let c = mul_phi_planar(&t.c);
        match t.kind {
            HalfKind::Acute => {
                let e = a.add(&div_phi_planar(&c.sub(&a)));
                vec![
                    HalfTile {
                        kind: HalfKind::Gnomon,
                        apex: e,
                        b: a,
                        c: b,
                    },
                    HalfTile {
                        kind: HalfKind::Acute,
                        apex: b,
                        b: c,
                        c: e,
                    },
                ]
            }
            HalfKind::Gnomon => {
                let f = c.add(&div_phi_planar(&b.sub(&c)));
                let e = c.add(&div_phi_planar(&a.sub(&c)));
                vec![
                    HalfTile {
                        kind: HalfKind::Gnomon,
                        apex: f,
                        b: a,
                        c: b,
                    },
                    HalfTile {
                        kind: HalfKind::Gnomon,
                        apex: e,
                        b: c,
                        c: f,
                    },
                    HalfTile {
                        kind: HalfKind::Acute,
                        apex: f,
                        b: a,
                        c: e,
                    },
                ]
            }
        }
    }

    /// Startup validation: unit legs, exact base lengths and the
    /// vertex-hierarchy property on every prototype placement.
    pub fn validate(&self) -> Result<()> {
        for kind in [HalfKind::Gnomon, HalfKind::Acute] {
            for d in 0..10u8 {
                for flip in [false, true] {
                    let apex = PlanarPoint::ORIGIN;
                    let (b, c) = prototype_base(kind, d, flip);
                    let t = HalfTile { kind, apex, b, c };
                    check_half_shape(&t)?;
                    let kids = self.substitute_half(&t);
                    for k in &kids {
                        check_half_shape(k)?;
                    }
                    let child_vertices: Vec<PlanarPoint> =
                        kids.iter().flat_map(|k| k.vertices()).collect();
                    for v in t.vertices() {
                        let ev = mul_phi_planar(&v);
                        if !child_vertices.contains(&ev) {
                            return Err(Error::MergeFailure(format!(
                                "vertex hierarchy broken for {t:?}"
                            )));
                        }
                    }
                    let expected = match kind {
                        HalfKind::Gnomon => 3,
                        HalfKind::Acute => 2,
                    };
                    if kids.len() != expected {
                        return Err(Error::MergeFailure("wrong child count".into()));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Base vertices for a prototype half-tile with apex at the origin and
/// apex→b along w_d; `flip` mirrors it.
pub fn prototype_base(kind: HalfKind, d: u8, flip: bool) -> (PlanarPoint, PlanarPoint) {
    let spread = match kind {
        HalfKind::Gnomon => 3, // apex angle 3π/5
        HalfKind::Acute => 1,  // apex angle π/5
    };
    let other = if flip {
        (d + 10 - spread) % 10
    } else {
        (d + spread) % 10
    };
    (direction(d), direction(other))
}

fn check_half_shape(t: &HalfTile) -> Result<()> {
    let leg1 = crate::lattice::dist2(&t.apex, &t.b);
    let leg2 = crate::lattice::dist2(&t.apex, &t.c);
    if leg1 != GoldenNum::ONE || leg2 != GoldenNum::ONE {
        return Err(Error::MergeFailure(format!("non-unit legs: {t:?}")));
    }
    let base = crate::lattice::dist2(&t.b, &t.c);
    let want = match t.kind {
        HalfKind::Gnomon => GoldenNum::from_parts(1, 1), // φ² = 1+φ
        HalfKind::Acute => GoldenNum::from_parts(2, -1), // (φ−1)² = 2−φ
    };
    if base != want {
        return Err(Error::MergeFailure(format!("wrong base length: {t:?}")));
    }
    Ok(())
}

/// Pairs triangles back into rhombi. Returns the tiles and the number of
/// unpaired boundary halves that were dropped.
pub fn merge_halves(halves: &[HalfTile]) -> Result<(Vec<RhombusTile>, usize)> {
    let (paired, unpaired) = merge_groups(halves)?;
    Ok((paired, unpaired.len()))
}

/// Like `merge_halves`, but every unpaired boundary half is completed to
/// its whole rhombus. The completion is forced: the half's base is a
/// rhombus diagonal, and only the mirror half can cover its other side in
/// any tiling extending the patch.
pub fn merge_halves_completed(halves: &[HalfTile]) -> Result<Vec<RhombusTile>> {
    let (mut tiles, unpaired) = merge_groups(halves)?;
    for h in unpaired {
        // the missing apex is the parallelogram point across the base
        let apex2 = h.b.add(&h.c).sub(&h.apex);
        tiles.push(rhombus_from_pair(h.kind, &h.b, &h.c, &h.apex, &apex2)?);
    }
    tiles.sort();
    tiles.dedup();
    Ok(tiles)
}

fn merge_groups(halves: &[HalfTile]) -> Result<(Vec<RhombusTile>, Vec<HalfTile>)> {
    let mut groups: HashMap<(HalfKind, PlanarPoint, PlanarPoint), Vec<&HalfTile>> = HashMap::new();
    for h in halves {
        groups.entry((h.kind, h.b, h.c)).or_default().push(h);
    }
    let mut tiles = Vec::with_capacity(groups.len());
    let mut unpaired = Vec::new();
    for ((kind, b, c), members) in groups {
        match members.len() {
            1 => unpaired.push(*members[0]),
            2 => {
                let (h1, h2) = (members[0], members[1]);
                if h1.apex == h2.apex {
                    return Err(Error::MergeFailure(format!(
                        "coincident halves at {b:?},{c:?}"
                    )));
                }
                tiles.push(rhombus_from_pair(kind, &b, &c, &h1.apex, &h2.apex)?);
            }
            n => {
                return Err(Error::MergeFailure(format!(
                    "{n} halves share base {b:?},{c:?}"
                )))
            }
        }
    }
    Ok((tiles, unpaired))
}

fn direction_index(delta: &PlanarPoint) -> Result<u8> {
    (0..10u8)
        .find(|&d| direction(d) == *delta)
        .ok_or_else(|| Error::MergeFailure(format!("not a unit direction: {delta:?}")))
}

fn rhombus_from_pair(
    kind: HalfKind,
    b: &PlanarPoint,
    c: &PlanarPoint,
    apex1: &PlanarPoint,
    apex2: &PlanarPoint,
) -> Result<RhombusTile> {
    match kind {
        HalfKind::Gnomon => {
            // fat: sharp corners b (marked) and c, obtuse corners apex1/2
            let d1 = direction_index(&apex1.sub(b))?;
            let d2 = direction_index(&apex2.sub(b))?;
            let orient = if (d1 + 2) % 10 == d2 {
                d1
            } else if (d2 + 2) % 10 == d1 {
                d2
            } else {
                return Err(Error::MergeFailure(format!(
                    "gnomon pair with incompatible legs {d1},{d2}"
                )));
            };
            let t = RhombusTile::new(Shape::Fat, *b, orient, Some(false));
            debug_assert_eq!(t.marked_corner(), Some(*b));
            Ok(t)
        }
        HalfKind::Acute => {
            // thin: sharp corners apex1/2, obtuse b (marked) and c
            let d_m = direction_index(&b.sub(apex1))?;
            let d_u = direction_index(&c.sub(apex1))?;
            let (orient, mark) = if (d_m + 1) % 10 == d_u {
                (d_m, false)
            } else if (d_u + 1) % 10 == d_m {
                (d_u, true)
            } else {
                return Err(Error::MergeFailure(format!(
                    "acute pair with incompatible legs {d_m},{d_u}"
                )));
            };
            let t = RhombusTile::new(Shape::Thin, *apex1, orient, Some(mark));
            debug_assert_eq!(t.marked_corner(), Some(*b));
            Ok(t)
        }
    }
}

/// One substitution step on a labelled patch: expand, subdivide, merge,
/// and complete the forced boundary rhombi (the image as usually drawn,
/// with the half-rhombi shared between neighbouring tile images).
pub fn apply_sigma(patch: &Patch) -> Result<Patch> {
    let rule = SubstitutionRule::penrose();
    let mut halves = Vec::with_capacity(patch.len() * 5);
    for t in patch.tiles() {
        for h in halves_of_tile(t)? {
            halves.extend(rule.substitute_half(&h));
        }
    }
    let tiles = merge_halves_completed(&halves)?;
    Ok(Patch::from_tiles_unchecked(tiles))
}

/// Result of an n-step substitution with ancestry at the half-tile level
/// (rhombi straddle metatile boundaries; half-tiles never do).
pub struct IteratedPatch {
    pub patch: Patch,
    /// All triangles after n steps.
    pub halves: Vec<HalfTile>,
    /// Index of the order-n metatile root (input tile index) per triangle.
    pub root_of_half: Vec<u32>,
    pub dropped_halves: usize,
}

/// n substitution steps at the triangle level, merged once at the end.
///
/// `keep_radius`: when set, triangles whose descendants cannot reach the
/// disc of that radius about the origin are pruned each step (descendants
/// of a triangle stay inside its φ-power image).
pub fn iterate_sigma(
    patch: &Patch,
    n: u32,
    keep_radius: Option<GoldenNum>,
) -> Result<IteratedPatch> {
    let rule = SubstitutionRule::penrose();
    let mut halves: Vec<HalfTile> = Vec::new();
    let mut roots: Vec<u32> = Vec::new();
    for (i, t) in patch.tiles().iter().enumerate() {
        for h in halves_of_tile(t)? {
            halves.push(h);
            roots.push(i as u32);
        }
    }
    for step in 0..n {
        let remaining = n - step; // steps still to apply, including this one
        if let Some(r) = keep_radius {
            // threshold at this level: r/φ^remaining plus a tile diameter
            let mut thr = r;
            for _ in 0..remaining {
                thr = thr * GoldenNum::from_parts(-1, 1); // ×(φ−1) = ÷φ
            }
            thr += GoldenNum::from_int(2);
            let thr2 = thr * thr;
            let mut kept = Vec::with_capacity(halves.len());
            let mut kept_roots = Vec::with_capacity(roots.len());
            for (h, r0) in halves.iter().zip(roots.iter()) {
                let near = h
                    .vertices()
                    .iter()
                    .any(|v| FramePoint::from_planar(v).norm2() <= thr2);
                if near {
                    kept.push(*h);
                    kept_roots.push(*r0);
                }
            }
            halves = kept;
            roots = kept_roots;
        }
        if halves.len() > 8_000_000 {
            return Err(Error::ResourceLimit(format!(
                "{} half-tiles at step {step}",
                halves.len()
            )));
        }
        let mut next = Vec::with_capacity(halves.len() * 3);
        let mut next_roots = Vec::with_capacity(halves.len() * 3);
        for (h, r0) in halves.iter().zip(roots.iter()) {
            for child in rule.substitute_half(h) {
                next.push(child);
                next_roots.push(*r0);
            }
        }
        halves = next;
        roots = next_roots;
    }
    let (tiles, dropped) = merge_halves(&halves)?;
    Ok(IteratedPatch {
        patch: Patch::from_tiles_unchecked(tiles),
        halves,
        root_of_half: roots,
        dropped_halves: dropped,
    })
}

/// σ^{4m} of the sun: nested central patches of the canonical Penrose
/// tiling (the sun is at the centre of its fourth image).
pub fn canonical_tiling_patch(m: u32) -> Result<Patch> {
    if m == 0 {
        return Err(Error::PreconditionViolated("m must be ≥ 1".into()));
    }
    Ok(iterate_sigma(&crate::patch::sun_patch(), 4 * m, None)?.patch)
}

/// Substitution iterate of the sun pruned to a disc about the origin.
pub fn canonical_patch_in_disc(steps: u32, radius: GoldenNum) -> Result<Patch> {
    Ok(iterate_sigma(&crate::patch::sun_patch(), steps, Some(radius))?.patch)
}

/// The 1-map at the origin of the canonical tiling: the sun surrounded by
/// a layer of thin rhombi. Seed for the atlas closure.
pub fn penrose_seed_kmap(k: u32) -> Result<KMap> {
    let patch = iterate_sigma(&crate::patch::sun_patch(), 4, None)?.patch;
    patch.extract_kmap(&PlanarPoint::ORIGIN, k)
}

/// The directed graph produced by the atlas closure: vertices are atlas
/// classes, u→v when v appears (certified) in σ(u).
#[derive(Clone, Debug)]
pub struct AtlasGraph {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

impl AtlasGraph {
    pub fn out_neighbors(&self, u: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .edges
            .iter()
            .filter(|(a, _)| *a == u)
            .map(|(_, b)| *b)
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn is_strongly_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let reach = |forward: bool| {
            let mut seen = vec![false; self.n];
            let mut stack = vec![0usize];
            seen[0] = true;
            while let Some(u) = stack.pop() {
                for (a, b) in &self.edges {
                    let (from, to) = if forward { (*a, *b) } else { (*b, *a) };
                    if from == u && !seen[to] {
                        seen[to] = true;
                        stack.push(to);
                    }
                }
            }
            seen.into_iter().all(|s| s)
        };
        reach(true) && reach(false)
    }
}

/// Worklist closure of certified k-maps under σ from a certified seed.
/// Returns the atlas under the requested equivalence together with the
/// substitution graph over its classes.
pub fn atlas_by_substitution(
    rule: &SubstitutionRule,
    seed: &KMap,
    k: u32,
    mode: EquivMode,
) -> Result<(Atlas, AtlasGraph)> {
    let _ = rule;
    let mut entries: Vec<KMap> = Vec::new();
    let mut index: HashMap<Vec<RhombusTile>, usize> = HashMap::new();
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut work: Vec<usize> = Vec::new();

    let canon = seed.canonical(mode);
    index.insert(canon.tiles.clone(), 0);
    entries.push(canon);
    work.push(0);

    while let Some(u) = work.pop() {
        let patch = entries[u].to_patch();
        // erosion at the image boundary can hide k-maps from a single σ
        // step, so certified k-maps are collected from σ, σ² and σ³ of
        // every class; this dominates the one-step closure without
        // changing its fixed point. Graph edges keep the one-step meaning
        // (v appears in σ(u)).
        let mut image = apply_sigma(&patch)?;
        let mut found_any = false;
        for depth in 1..=3u32 {
            let mut vs: Vec<PlanarPoint> = image.vertices().copied().collect();
            vs.sort();
            for v in vs {
                let Ok(km) = image.extract_kmap(&v, k) else {
                    continue;
                };
                found_any = true;
                let c = km.canonical(mode);
                let next = match index.get(&c.tiles) {
                    Some(&i) => i,
                    None => {
                        let i = entries.len();
                        index.insert(c.tiles.clone(), i);
                        entries.push(c);
                        work.push(i);
                        i
                    }
                };
                if depth == 1 {
                    edges.push((u, next));
                }
            }
            if depth < 3 {
                image = apply_sigma(&image)?;
            }
        }
        if !found_any {
            return Err(Error::NonCertifiableImage);
        }
    }
    edges.sort_unstable();
    edges.dedup();
    let n = entries.len();
    // deterministic entry order; remap the graph along with it
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| entries[a].tiles.cmp(&entries[b].tiles));
    let mut rank = vec![0usize; n];
    for (new, &old) in order.iter().enumerate() {
        rank[old] = new;
    }
    let sorted_entries: Vec<KMap> = order.iter().map(|&old| entries[old].clone()).collect();
    let mut edges: Vec<(usize, usize)> = edges.into_iter().map(|(a, b)| (rank[a], rank[b])).collect();
    edges.sort_unstable();
    edges.dedup();
    let atlas = Atlas {
        k,
        mode,
        entries: sorted_entries,
    };
    Ok((atlas, AtlasGraph { n, edges }))
}
