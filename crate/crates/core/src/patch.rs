//! Patches (finite tile sets), patterns (patches up to translation),
//! k-maps and edge patterns, with exact validity checks and
//! canonicalization under translation or the dihedral isometry group.

use std::collections::{HashMap, HashSet, VecDeque};

use crate::golden::GoldenNum;
use crate::lattice::{FramePoint, Isometry, PlanarPoint};
use crate::tile::{RhombusTile, Shape};
use crate::{Error, Result};

/// Unordered edge key.
pub fn edge_key(a: PlanarPoint, b: PlanarPoint) -> (PlanarPoint, PlanarPoint) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// A finite set of placed rhombi with derived incidence structure.
#[derive(Clone)]
pub struct Patch {
    tiles: Vec<RhombusTile>,
    tile_set: HashSet<RhombusTile>,
    /// vertex → (tile index, corner index) incidences
    stars: HashMap<PlanarPoint, Vec<(u32, u8)>>,
    /// vertex → neighbours along tile edges
    adjacency: HashMap<PlanarPoint, Vec<PlanarPoint>>,
    /// edge → tile indices
    edge_tiles: HashMap<(PlanarPoint, PlanarPoint), Vec<u32>>,
}

impl std::fmt::Debug for Patch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Patch({} tiles)", self.tiles.len())
    }
}

impl Patch {
    /// Builds and validates: no duplicate tiles, pairwise interiors
    /// disjoint, and tile pairs meeting only in a vertex or a whole edge.
    pub fn new(tiles: Vec<RhombusTile>) -> Result<Patch> {
        let p = Patch::from_tiles_unchecked(tiles);
        p.validate_geometry()?;
        Ok(p)
    }

    /// Builds the incidence structure without geometric validation. Used
    /// for machine-generated patches that are valid by construction.
    pub fn from_tiles_unchecked(mut tiles: Vec<RhombusTile>) -> Patch {
        tiles.sort();
        tiles.dedup();
        let mut stars: HashMap<PlanarPoint, Vec<(u32, u8)>> = HashMap::new();
        let mut adjacency: HashMap<PlanarPoint, Vec<PlanarPoint>> = HashMap::new();
        let mut edge_tiles: HashMap<(PlanarPoint, PlanarPoint), Vec<u32>> = HashMap::new();
        for (i, t) in tiles.iter().enumerate() {
            for (ci, c) in t.corners().iter().enumerate() {
                stars.entry(*c).or_default().push((i as u32, ci as u8));
            }
            for (a, b) in t.edges() {
                edge_tiles.entry(edge_key(a, b)).or_default().push(i as u32);
            }
        }
        for (a, b) in edge_tiles.keys() {
            adjacency.entry(*a).or_default().push(*b);
            adjacency.entry(*b).or_default().push(*a);
        }
        for v in adjacency.values_mut() {
            v.sort();
            v.dedup();
        }
        let tile_set = tiles.iter().copied().collect();
        Patch {
            tiles,
            tile_set,
            stars,
            adjacency,
            edge_tiles,
        }
    }

    pub fn tiles(&self) -> &[RhombusTile] {
        &self.tiles
    }

    pub fn len(&self) -> usize {
        self.tiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tiles.is_empty()
    }

    pub fn contains_tile(&self, t: &RhombusTile) -> bool {
        self.tile_set.contains(t)
    }

    pub fn vertices(&self) -> impl Iterator<Item = &PlanarPoint> {
        self.stars.keys()
    }

    pub fn is_vertex(&self, v: &PlanarPoint) -> bool {
        self.stars.contains_key(v)
    }

    pub fn neighbors(&self, v: &PlanarPoint) -> &[PlanarPoint] {
        self.adjacency.get(v).map(|v| v.as_slice()).unwrap_or(&[])
    }

    pub fn edge_count(&self) -> usize {
        self.edge_tiles.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.stars.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = &(PlanarPoint, PlanarPoint)> {
        self.edge_tiles.keys()
    }

    pub fn tiles_at_edge(&self, a: PlanarPoint, b: PlanarPoint) -> &[u32] {
        self.edge_tiles
            .get(&edge_key(a, b))
            .map(|v| v.as_slice())
            .unwrap_or(&[])
    }

    /// Tiles having v as a corner.
    pub fn tiles_at(&self, v: &PlanarPoint) -> impl Iterator<Item = &RhombusTile> {
        self.stars
            .get(v)
            .into_iter()
            .flatten()
            .map(move |(i, _)| &self.tiles[*i as usize])
    }

    /// Total tile angle at v, in π/5 units. 10 means a complete star.
    pub fn angle_units_at(&self, v: &PlanarPoint) -> u32 {
        self.stars
            .get(v)
            .into_iter()
            .flatten()
            .map(|(i, ci)| self.tiles[*i as usize].corner_angles()[*ci as usize] as u32)
            .sum()
    }

    /// A vertex whose surrounding tiles close up to full angle.
    pub fn is_interior_vertex(&self, v: &PlanarPoint) -> bool {
        self.angle_units_at(v) == 10
    }

    pub fn interior_vertices(&self) -> Vec<PlanarPoint> {
        let mut vs: Vec<_> = self
            .stars
            .keys()
            .filter(|v| self.is_interior_vertex(v))
            .copied()
            .collect();
        vs.sort();
        vs
    }

    /// Breadth-first edge distances from `from`, up to `max_d`.
    pub fn bfs_distances(&self, from: &PlanarPoint, max_d: u32) -> HashMap<PlanarPoint, u32> {
        let mut dist = HashMap::new();
        let mut q = VecDeque::new();
        dist.insert(*from, 0u32);
        q.push_back(*from);
        while let Some(v) = q.pop_front() {
            let d = dist[&v];
            if d == max_d {
                continue;
            }
            for n in self.neighbors(&v) {
                if !dist.contains_key(n) {
                    dist.insert(*n, d + 1);
                    q.push_back(*n);
                }
            }
        }
        dist
    }

    /// Extracts the k-map at `center`. Errors with `CenterNotAVertex` or,
    /// when the patch cannot certify the result, `InsufficientContext`.
    ///
    /// Certification: every vertex at patch distance ≤ k must have a
    /// complete star. By induction this forces patch distances to agree
    /// with the ambient-tiling distances up to k+1 and every tile with a
    /// vertex at distance ≤ k to be present, so the extracted k-map is
    /// exact whenever the patch is a subset of a tiling.
    pub fn extract_kmap(&self, center: &PlanarPoint, k: u32) -> Result<KMap> {
        if !self.is_vertex(center) {
            return Err(Error::CenterNotAVertex);
        }
        let dist = self.bfs_distances(center, k + 2);
        for (v, d) in &dist {
            if *d <= k && !self.is_interior_vertex(v) {
                return Err(Error::InsufficientContext);
            }
        }
        let mut tiles: Vec<RhombusTile> = self
            .tiles
            .iter()
            .filter(|t| {
                t.corners()
                    .iter()
                    .any(|c| dist.get(c).is_some_and(|d| *d <= k))
            })
            .copied()
            .collect();
        tiles.sort();
        Ok(KMap {
            center: *center,
            tiles,
            k,
        })
    }

    /// True when `extract_kmap` would succeed.
    pub fn can_certify(&self, center: &PlanarPoint, k: u32) -> bool {
        self.is_vertex(center)
            && self
                .bfs_distances(center, k)
                .iter()
                .all(|(v, _)| self.is_interior_vertex(v))
    }

    /// Edge patterns around every interior edge whose endpoints both have
    /// complete stars; edges lacking context are skipped.
    pub fn edge_patterns(&self) -> Vec<EdgePattern> {
        let mut out = Vec::new();
        for (a, b) in self.edge_tiles.keys() {
            if self.is_interior_vertex(a) && self.is_interior_vertex(b) {
                let mut tiles: Vec<RhombusTile> = self
                    .tiles_at(a)
                    .chain(self.tiles_at(b))
                    .copied()
                    .collect();
                tiles.sort();
                tiles.dedup();
                out.push(EdgePattern {
                    tiles,
                    edge: (*a, *b),
                });
            }
        }
        out.sort_by(|x, y| x.edge.cmp(&y.edge));
        out
    }

    pub fn erase_labels(&self) -> Patch {
        Patch::from_tiles_unchecked(self.tiles.iter().map(|t| t.erase_label()).collect())
    }

    pub fn translate(&self, by: &PlanarPoint) -> Patch {
        Patch::from_tiles_unchecked(self.tiles.iter().map(|t| t.translate(by)).collect())
    }

    pub fn apply_isometry(&self, g: &Isometry) -> Patch {
        Patch::from_tiles_unchecked(self.tiles.iter().map(|t| t.apply_isometry(g)).collect())
    }

    /// Pairwise-disjointness and edge-to-edge validation, exact.
    pub fn validate_geometry(&self) -> Result<()> {
        // spatial buckets on approximate anchor positions; tiles further
        // apart than any tile diameter cannot interact
        let mut buckets: HashMap<(i64, i64), Vec<u32>> = HashMap::new();
        const CELL: f64 = 4.0;
        let mut pos = Vec::with_capacity(self.tiles.len());
        for (i, t) in self.tiles.iter().enumerate() {
            let (x, y) = FramePoint::from_planar(&t.anchor).to_f64();
            let key = ((x / CELL).floor() as i64, (y / CELL).floor() as i64);
            buckets.entry(key).or_default().push(i as u32);
            pos.push(key);
        }
        for (i, t) in self.tiles.iter().enumerate() {
            let (bx, by) = pos[i];
            for dx in -1..=1 {
                for dy in -1..=1 {
                    let Some(cand) = buckets.get(&(bx + dx, by + dy)) else {
                        continue;
                    };
                    for &j in cand {
                        if (j as usize) <= i {
                            continue;
                        }
                        let u = &self.tiles[j as usize];
                        if tiles_interiors_overlap(t, u) {
                            return Err(Error::InvalidPatch(format!(
                                "overlapping tiles {t:?} and {u:?}"
                            )));
                        }
                        check_edge_incidence(t, u)?;
                    }
                }
            }
        }
        Ok(())
    }

    /// Connectivity plus the Euler disk test V − E + F = 1.
    pub fn check_topology(&self) -> Result<()> {
        if self.tiles.is_empty() {
            return Err(Error::InvalidPatch("empty patch".into()));
        }
        // connectivity over shared edges
        let mut seen = vec![false; self.tiles.len()];
        let mut q = VecDeque::new();
        seen[0] = true;
        q.push_back(0u32);
        let mut count = 1;
        while let Some(i) = q.pop_front() {
            for (a, b) in self.tiles[i as usize].edges() {
                for &j in self.tiles_at_edge(a, b) {
                    if !seen[j as usize] {
                        seen[j as usize] = true;
                        count += 1;
                        q.push_back(j);
                    }
                }
            }
        }
        if count != self.tiles.len() {
            return Err(Error::InvalidPatch(format!(
                "patch not edge-connected: {count} of {} tiles reachable",
                self.tiles.len()
            )));
        }
        let euler =
            self.vertex_count() as i64 - self.edge_count() as i64 + self.tiles.len() as i64;
        if euler != 1 {
            return Err(Error::InvalidPatch(format!(
                "patch not simply connected: V−E+F = {euler}"
            )));
        }
        Ok(())
    }

    /// Lexicographically least vertex in exact plane coordinates — the
    /// translation-canonical reference point.
    pub fn reference_vertex(&self) -> Option<PlanarPoint> {
        self.stars
            .keys()
            .min_by_key(|p| {
                let f = FramePoint::from_planar(p);
                (f.x, f.y)
            })
            .copied()
    }
}

/// Two placed tiles conflict when their interiors overlap or they meet
/// along a partial edge or T-junction.
pub(crate) fn tiles_conflict(t: &RhombusTile, u: &RhombusTile) -> bool {
    if t == u {
        return false;
    }
    tiles_interiors_overlap(t, u) || check_edge_incidence(t, u).is_err()
}

/// Strict interior overlap via separating axes (both tiles' edge
/// directions); everything exact over Q(φ).
fn tiles_interiors_overlap(t: &RhombusTile, u: &RhombusTile) -> bool {
    let mut axes: Vec<u8> = vec![
        t.orient % 5,
        (t.orient + t.shape.spread()) % 5,
        u.orient % 5,
        (u.orient + u.shape.spread()) % 5,
    ];
    axes.sort_unstable();
    axes.dedup();
    let fc = |p: &PlanarPoint| FramePoint::from_planar(p);
    let tc: Vec<FramePoint> = t.corners().iter().map(&fc).collect();
    let uc: Vec<FramePoint> = u.corners().iter().map(&fc).collect();
    for d in axes {
        let dir = fc(&crate::lattice::direction(d));
        // projection on the normal axis: cross(dir, p)
        let proj = |p: &FramePoint| dir.x * p.y - dir.y * p.x;
        let (tmin, tmax) = minmax(tc.iter().map(proj));
        let (umin, umax) = minmax(uc.iter().map(proj));
        if tmax <= umin || umax <= tmin {
            return false;
        }
    }
    true
}

fn minmax(it: impl Iterator<Item = GoldenNum>) -> (GoldenNum, GoldenNum) {
    let mut lo: Option<GoldenNum> = None;
    let mut hi: Option<GoldenNum> = None;
    for v in it {
        if lo.map_or(true, |l| v < l) {
            lo = Some(v);
        }
        if hi.map_or(true, |h| v > h) {
            hi = Some(v);
        }
    }
    (lo.unwrap(), hi.unwrap())
}

/// Two non-overlapping tiles may only touch in a single shared vertex or a
/// whole shared edge.
fn check_edge_incidence(t: &RhombusTile, u: &RhombusTile) -> Result<()> {
    let te = t.edges();
    let ue = u.edges();
    for (a1, b1) in &te {
        for (a2, b2) in &ue {
            if edge_key(*a1, *b1) == edge_key(*a2, *b2) {
                continue; // identical edge: fine
            }
            if !segments_touch_legally(a1, b1, a2, b2) {
                return Err(Error::InvalidPatch(format!(
                    "tiles {t:?} and {u:?} meet along a partial edge or T-junction"
                )));
            }
        }
    }
    Ok(())
}

fn orient(a: &FramePoint, b: &FramePoint, c: &FramePoint) -> i32 {
    let abx = b.x - a.x;
    let aby = b.y - a.y;
    let acx = c.x - a.x;
    let acy = c.y - a.y;
    (abx * acy - aby * acx).signum()
}

/// Distinct segments may share at most a common endpoint.
fn segments_touch_legally(
    a1: &PlanarPoint,
    b1: &PlanarPoint,
    a2: &PlanarPoint,
    b2: &PlanarPoint,
) -> bool {
    let (fa1, fb1, fa2, fb2) = (
        FramePoint::from_planar(a1),
        FramePoint::from_planar(b1),
        FramePoint::from_planar(a2),
        FramePoint::from_planar(b2),
    );
    let d1 = orient(&fa1, &fb1, &fa2);
    let d2 = orient(&fa1, &fb1, &fb2);
    let d3 = orient(&fa2, &fb2, &fa1);
    let d4 = orient(&fa2, &fb2, &fb1);
    if d1 == 0 && d2 == 0 {
        // collinear: 1D intervals may share at most an endpoint
        let axis = FramePoint {
            x: fb1.x - fa1.x,
            y: fb1.y - fa1.y,
        };
        let proj = |p: &FramePoint| axis.x * p.x + axis.y * p.y;
        let (lo1, hi1) = minmax([proj(&fa1), proj(&fb1)].into_iter());
        let (lo2, hi2) = minmax([proj(&fa2), proj(&fb2)].into_iter());
        return hi1 <= lo2 || hi2 <= lo1;
    }
    if d1 != d2 && d3 != d4 && d1 != 0 && d2 != 0 && d3 != 0 && d4 != 0 {
        return false; // proper crossing
    }
    // endpoint strictly inside the other segment = T-junction
    let strictly_within = |p: &PlanarPoint, a: &PlanarPoint, b: &PlanarPoint| {
        let (fp, fa, fb) = (
            FramePoint::from_planar(p),
            FramePoint::from_planar(a),
            FramePoint::from_planar(b),
        );
        if orient(&fa, &fb, &fp) != 0 {
            return false;
        }
        p != a && p != b && {
            let axis = FramePoint {
                x: fb.x - fa.x,
                y: fb.y - fa.y,
            };
            let proj = |q: &FramePoint| axis.x * q.x + axis.y * q.y;
            let (lo, hi) = minmax([proj(&fa), proj(&fb)].into_iter());
            let v = proj(&fp);
            lo < v && v < hi
        }
    };
    !(strictly_within(a2, a1, b1)
        || strictly_within(b2, a1, b1)
        || strictly_within(a1, a2, b2)
        || strictly_within(b1, a2, b2))
}

/// Equivalence used when deduplicating patterns.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EquivMode {
    Translation,
    Isometry,
}

/// A patch up to translation: tiles shifted so the reference vertex sits
/// at the origin, sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pattern {
    pub tiles: Vec<RhombusTile>,
}

/// Translation-canonical form of a bag of tiles.
fn canonical_translation(tiles: &[RhombusTile]) -> Vec<RhombusTile> {
    let reference = tiles
        .iter()
        .flat_map(|t| t.corners())
        .min_by_key(|p| {
            let f = FramePoint::from_planar(p);
            (f.x, f.y)
        })
        .expect("empty tile set");
    let mut out: Vec<RhombusTile> = tiles.iter().map(|t| t.translate_back(&reference)).collect();
    out.sort();
    out
}

/// Canonicalizes a patch into a pattern under the requested mode.
pub fn canonicalize(patch: &Patch, mode: EquivMode) -> Pattern {
    canonicalize_tiles(patch.tiles(), mode)
}

pub fn canonicalize_tiles(tiles: &[RhombusTile], mode: EquivMode) -> Pattern {
    match mode {
        EquivMode::Translation => Pattern {
            tiles: canonical_translation(tiles),
        },
        EquivMode::Isometry => {
            let mut best: Option<Vec<RhombusTile>> = None;
            for g in Isometry::all() {
                let moved: Vec<RhombusTile> =
                    tiles.iter().map(|t| t.apply_isometry(&g)).collect();
                let cand = canonical_translation(&moved);
                if best.as_ref().map_or(true, |b| cand < *b) {
                    best = Some(cand);
                }
            }
            Pattern {
                tiles: best.unwrap(),
            }
        }
    }
}

/// A k-map: the tiles having a vertex within edge distance k of `center`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KMap {
    pub center: PlanarPoint,
    pub tiles: Vec<RhombusTile>,
    pub k: u32,
}

impl KMap {
    /// Canonical form: center moved to the origin; in isometry mode the
    /// least of the 20 group images.
    pub fn canonical(&self, mode: EquivMode) -> KMap {
        let anchored: Vec<RhombusTile> = self
            .tiles
            .iter()
            .map(|t| t.translate_back(&self.center))
            .collect();
        let tiles = match mode {
            EquivMode::Translation => {
                let mut ts = anchored;
                ts.sort();
                ts
            }
            EquivMode::Isometry => {
                let mut best: Option<Vec<RhombusTile>> = None;
                for g in Isometry::all() {
                    let mut cand: Vec<RhombusTile> =
                        anchored.iter().map(|t| t.apply_isometry(&g)).collect();
                    cand.sort();
                    if best.as_ref().map_or(true, |b| cand < *b) {
                        best = Some(cand);
                    }
                }
                best.unwrap()
            }
        };
        KMap {
            center: PlanarPoint::ORIGIN,
            tiles,
            k: self.k,
        }
    }

    pub fn erase_labels(&self) -> KMap {
        KMap {
            center: self.center,
            tiles: self.tiles.iter().map(|t| t.erase_label()).collect(),
            k: self.k,
        }
    }

    pub fn is_labelled(&self) -> bool {
        self.tiles.iter().all(|t| t.mark.is_some())
    }

    pub fn to_patch(&self) -> Patch {
        Patch::from_tiles_unchecked(self.tiles.clone())
    }

    /// Radius: max distance from the center to a tile corner.
    pub fn radius2(&self) -> GoldenNum {
        self.tiles
            .iter()
            .map(|t| t.max_corner_dist2(&self.center))
            .max()
            .unwrap_or(GoldenNum::ZERO)
    }
}

/// A set of canonical k-maps under a fixed equivalence.
#[derive(Clone, Debug)]
pub struct Atlas {
    pub k: u32,
    pub mode: EquivMode,
    pub entries: Vec<KMap>,
}

impl Atlas {
    pub fn from_kmaps(k: u32, mode: EquivMode, kmaps: impl IntoIterator<Item = KMap>) -> Atlas {
        let mut set: Vec<KMap> = Vec::new();
        let mut seen: HashSet<Vec<RhombusTile>> = HashSet::new();
        for km in kmaps {
            let c = km.canonical(mode);
            if seen.insert(c.tiles.clone()) {
                set.push(c);
            }
        }
        set.sort();
        Atlas {
            k,
            mode,
            entries: set,
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn contains(&self, km: &KMap) -> bool {
        let c = km.canonical(self.mode);
        self.entries.iter().any(|e| e.tiles == c.tiles)
    }

    /// Index of the class a k-map belongs to, if any.
    pub fn class_of(&self, km: &KMap) -> Option<usize> {
        let c = km.canonical(self.mode);
        self.entries.iter().position(|e| e.tiles == c.tiles)
    }

    /// The same atlas with labels erased (entries re-deduplicated).
    pub fn erase_labels(&self) -> Atlas {
        Atlas::from_kmaps(
            self.k,
            self.mode,
            self.entries.iter().map(|e| e.erase_labels()),
        )
    }
}

/// The tiles around one edge, with the edge distinguished.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgePattern {
    pub tiles: Vec<RhombusTile>,
    pub edge: (PlanarPoint, PlanarPoint),
}

impl EdgePattern {
    /// Canonical form under isometry: one edge endpoint at the origin,
    /// minimized over both anchorings and all 20 isometries.
    pub fn canonical(&self) -> EdgePattern {
        let mut best: Option<(Vec<RhombusTile>, PlanarPoint)> = None;
        for (from, to) in [(self.edge.0, self.edge.1), (self.edge.1, self.edge.0)] {
            let anchored: Vec<RhombusTile> =
                self.tiles.iter().map(|t| t.translate_back(&from)).collect();
            let other = to.sub(&from);
            for g in Isometry::all() {
                let mut cand: Vec<RhombusTile> =
                    anchored.iter().map(|t| t.apply_isometry(&g)).collect();
                cand.sort();
                let o = g.apply(&other);
                if best
                    .as_ref()
                    .map_or(true, |(bt, bo)| (&cand, &o) < (bt, bo))
                {
                    best = Some((cand, o));
                }
            }
        }
        let (tiles, other) = best.unwrap();
        EdgePattern {
            tiles,
            edge: (PlanarPoint::ORIGIN, other),
        }
    }

    pub fn erase_labels(&self) -> EdgePattern {
        EdgePattern {
            tiles: self.tiles.iter().map(|t| t.erase_label()).collect(),
            edge: self.edge,
        }
    }
}

/// The sun: five fat rhombi sharing their marked sharp corner at the
/// origin. This is the seed whose σ⁴ iterates fix the canonical tiling.
pub fn sun_patch() -> Patch {
    let mut tiles = Vec::new();
    for i in 0..5u8 {
        tiles.push(RhombusTile::new(
            Shape::Fat,
            PlanarPoint::ORIGIN,
            2 * i,
            Some(false),
        ));
    }
    Patch::from_tiles_unchecked(tiles)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::planar_embed;

    #[test]
    fn sun_is_valid_and_closed() {
        let sun = sun_patch();
        sun.validate_geometry().unwrap();
        sun.check_topology().unwrap();
        assert_eq!(sun.len(), 5);
        assert!(sun.is_interior_vertex(&PlanarPoint::ORIGIN));
        assert_eq!(sun.angle_units_at(&PlanarPoint::ORIGIN), 10);
    }

    #[test]
    fn sun_zero_map_is_whole_sun() {
        let sun = sun_patch();
        let km = sun.extract_kmap(&PlanarPoint::ORIGIN, 0).unwrap();
        assert_eq!(km.tiles.len(), 5);
        // not certifiable at k = 1: outer vertices incomplete
        assert!(matches!(
            sun.extract_kmap(&PlanarPoint::ORIGIN, 1),
            Err(Error::InsufficientContext)
        ));
        // centre must be a vertex
        assert!(matches!(
            sun.extract_kmap(&planar_embed([3, 3, 0, 0, 1]), 0),
            Err(Error::CenterNotAVertex)
        ));
    }

    #[test]
    fn overlap_detected() {
        let a = RhombusTile::new(Shape::Fat, PlanarPoint::ORIGIN, 0, None);
        let b = RhombusTile::new(Shape::Fat, PlanarPoint::ORIGIN, 1, None);
        assert!(Patch::new(vec![a, b]).is_err());
    }

    #[test]
    fn shared_edge_is_fine() {
        let a = RhombusTile::new(Shape::Fat, PlanarPoint::ORIGIN, 0, None);
        // neighbour across the edge A..A+w0: fat anchored at origin spanned
        // the other way
        let b = RhombusTile::new(Shape::Fat, PlanarPoint::ORIGIN, 8, None);
        let p = Patch::new(vec![a, b]).unwrap();
        assert_eq!(p.len(), 2);
    }

    #[test]
    fn translation_classes() {
        let sun = sun_patch();
        let t = planar_embed([3, 1, 0, 0, 2]);
        let moved = sun.translate(&t);
        assert_eq!(
            canonicalize(&sun, EquivMode::Translation),
            canonicalize(&moved, EquivMode::Translation)
        );
        // a rotated generic patch is distinct under translation mode but
        // equal under isometry mode
        let tile = RhombusTile::new(Shape::Thin, PlanarPoint::ORIGIN, 0, None);
        let one = Patch::from_tiles_unchecked(vec![tile]);
        let rot = one.apply_isometry(&Isometry {
            rot: 2,
            mirror: false,
        });
        assert_ne!(
            canonicalize(&one, EquivMode::Translation),
            canonicalize(&rot, EquivMode::Translation)
        );
        assert_eq!(
            canonicalize(&one, EquivMode::Isometry),
            canonicalize(&rot, EquivMode::Isometry)
        );
    }

    #[test]
    fn canonicalization_idempotent_and_class_function() {
        let sun = sun_patch();
        for mode in [EquivMode::Translation, EquivMode::Isometry] {
            let p1 = canonicalize(&sun, mode);
            let again = Patch::from_tiles_unchecked(p1.tiles.clone());
            assert_eq!(canonicalize(&again, mode), p1);
            for g in Isometry::all() {
                let moved = sun.apply_isometry(&g);
                if mode == EquivMode::Isometry {
                    assert_eq!(canonicalize(&moved, mode), p1);
                }
            }
        }
    }

    #[test]
    fn single_tile_has_no_edge_patterns() {
        let p = Patch::from_tiles_unchecked(vec![RhombusTile::new(
            Shape::Fat,
            PlanarPoint::ORIGIN,
            0,
            None,
        )]);
        assert!(p.edge_patterns().is_empty());
    }

    #[test]
    fn euler_rejects_disconnected() {
        let a = RhombusTile::new(Shape::Fat, PlanarPoint::ORIGIN, 0, None);
        let far = planar_embed([8, 0, 3, 3, 0]);
        let b = RhombusTile::new(Shape::Fat, far, 0, None);
        let p = Patch::from_tiles_unchecked(vec![a, b]);
        assert!(p.check_topology().is_err());
    }
}
