//! The linear-recurrence constants of the Penrose tilings, kept as exact
//! algebraic data with certified interval enclosures, together with the
//! σ³ appearance check for the 0-maps and the construction of the patch
//! P_A1 in which every 1-map appears.

use std::collections::HashSet;

use crate::golden::GoldenNum;
use crate::interval::Interval;
use crate::lattice::{dist2, FramePoint, PlanarPoint};
use crate::localrules::PenroseAtlases;
use crate::patch::{EquivMode, KMap, Patch};
use crate::substitution::canonical_patch_in_disc;
use crate::tile::RhombusTile;
use crate::{Error, Result};

/// A constant stored as an exact algebraic description plus a certified
/// enclosure. When the value (or its square) lies in Q(φ) the exact
/// golden number is kept too.
#[derive(Clone, Debug)]
pub struct CertifiedValue {
    pub expr: String,
    pub exact: Option<GoldenNum>,
    pub exact_square: Option<GoldenNum>,
    pub interval: Interval,
}

impl CertifiedValue {
    fn golden(expr: &str, g: GoldenNum) -> CertifiedValue {
        CertifiedValue {
            expr: expr.into(),
            exact: Some(g),
            exact_square: Some(g * g),
            interval: Interval::from_golden(&g),
        }
    }

    fn sqrt_of(expr: &str, square: GoldenNum) -> CertifiedValue {
        CertifiedValue {
            expr: expr.into(),
            exact: None,
            exact_square: Some(square),
            interval: Interval::from_golden(&square).sqrt(),
        }
    }
}

/// The §-constants: C1 (covering radius of a single 0-map), r_v' and
/// r_v (vertex-distance bounds), r_c (0-map appearance radius around
/// third-order metatile corners), the C0 window, the recurrence factor
/// C_p and the 1-atlas radius R_A1.
#[derive(Clone, Debug)]
pub struct RecurrenceConstants {
    pub c1: CertifiedValue,
    pub r_v_prime: CertifiedValue,
    pub r_v: CertifiedValue,
    pub r_c: CertifiedValue,
    pub c0_lower: CertifiedValue,
    pub c0_upper: CertifiedValue,
    pub c_p: CertifiedValue,
    pub r_a1: CertifiedValue,
}

pub fn compute_constants() -> RecurrenceConstants {
    // C1 = 2 cos(2π/5) sin(2π/5) = sin(4π/5) = sin(π/5); C1² = (3−φ)/4
    let c1 = CertifiedValue::sqrt_of("sin(pi/5)", GoldenNum::new(3, -1, 4));
    // r_v' = 1/φ = φ − 1: circumradius of the short-diagonal half of the
    // fat rhombus
    let r_v_prime = CertifiedValue::golden("phi-1", GoldenNum::from_parts(-1, 1));
    // r_v = φ³·r_v' = φ² = 1 + φ
    let r_v = CertifiedValue::golden("1+phi", GoldenNum::from_parts(1, 1));
    // law of cosines with a = 3(1+φ), b = 1, c = 1−φ gives r_c² = 19+30φ
    let r_c = CertifiedValue::sqrt_of("sqrt(19+30*phi)", GoldenNum::from_parts(19, 30));
    let c0_lower = r_c.clone();
    let c0_upper = CertifiedValue {
        expr: "sqrt(19+30*phi) + 1 + phi".into(),
        exact: None,
        exact_square: None,
        interval: r_c.interval + r_v.interval,
    };
    // C_p = φ(r_v + r_c)/C1
    let c_p = CertifiedValue {
        expr: "phi*(1+phi+sqrt(19+30*phi))/sin(pi/5)".into(),
        exact: None,
        exact_square: None,
        interval: Interval::phi() * (r_v.interval + r_c.interval) / c1.interval,
    };
    // R_A1 = (1 + 2cos(π/10))·C_p with 2cos(π/10) = sqrt(2+φ)
    let two_cos = Interval::from_golden(&GoldenNum::from_parts(2, 1)).sqrt();
    let r_a1 = CertifiedValue {
        expr: "(1+sqrt(2+phi))*C_p".into(),
        exact: None,
        exact_square: None,
        interval: (Interval::point(1.0) + two_cos) * c_p.interval,
    };
    RecurrenceConstants {
        c1,
        r_v_prime,
        r_v,
        r_c,
        c0_lower,
        c0_upper,
        c_p,
        r_a1,
    }
}

/// One located occurrence of a 0-map class around a σ³ image centre.
#[derive(Clone, Debug)]
pub struct Occurrence {
    pub class: usize,
    pub center: PlanarPoint,
    /// Squared radius of the smallest origin-centred disc containing the
    /// occurrence (max squared corner distance from the σ³ centre).
    pub containing_radius2: GoldenNum,
}

#[derive(Clone, Debug)]
pub struct C0Report {
    /// occurrences[p][c]: the best witness of class c within radius r_c
    /// of the σ³ image centre of a class-p vertex.
    pub occurrences: Vec<Vec<Occurrence>>,
    /// Star around σ³(star): minimal containing radius² equals 19+30φ
    /// exactly.
    pub tight: Occurrence,
}

/// Verifies that every labelled 0-map class appears, as a whole pattern,
/// inside the disc of radius r_c about the σ³ image of a vertex of each
/// class, and that the star-around-σ³(star) case attains the bound
/// exactly. The σ³ images are taken inside the canonical tiling so the
/// boundary stars get their forced rhombi from the neighbouring
/// third-order metatiles.
pub fn verify_c0_bound(atlases: &PenroseAtlases) -> Result<C0Report> {
    let r_c2 = GoldenNum::from_parts(19, 30);
    let atlas = &atlases.labelled0;
    let n = atlas.len();
    let star_idx = star_class_index(atlases)?;
    let small = crate::substitution::iterate_sigma(&crate::patch::sun_patch(), 5, None)?.patch;
    let big = crate::substitution::iterate_sigma(&crate::patch::sun_patch(), 8, None)?.patch;

    // a deep occurrence of each class in σ⁴(sun)
    let bound2 = GoldenNum::from_int(196);
    let mut anchor: Vec<Option<PlanarPoint>> = vec![None; n];
    let mut vs: Vec<PlanarPoint> = small.vertices().copied().collect();
    vs.sort();
    for v in &vs {
        if dist2(v, &PlanarPoint::ORIGIN) > bound2 {
            continue;
        }
        if let Ok(km) = small.extract_kmap(v, 0) {
            if let Some(c) = atlas.class_of(&km) {
                if anchor[c].is_none() {
                    anchor[c] = Some(*v);
                }
            }
        }
    }
    let mut big_vs: Vec<PlanarPoint> = big.vertices().copied().collect();
    big_vs.sort();

    let mut occurrences: Vec<Vec<Occurrence>> = Vec::with_capacity(n);
    let mut tight: Option<Occurrence> = None;
    for (p_idx, a) in anchor.iter().enumerate() {
        let x = a.ok_or_else(|| {
            Error::BoundViolated(format!("class {p_idx} not found in σ⁵(sun)"))
        })?;
        // σ³ image centre
        let mut y = x;
        for _ in 0..3 {
            y = crate::lattice::mul_phi_planar(&y);
        }
        let mut best: Vec<Option<Occurrence>> = vec![None; n];
        for v in &big_vs {
            // occurrences must fit in the r_c disc; centres are certainly
            // within it too
            if dist2(v, &y) > r_c2 {
                continue;
            }
            let Ok(km) = big.extract_kmap(v, 0) else {
                continue;
            };
            let Some(c) = atlas.class_of(&km) else {
                return Err(Error::BoundViolated("0-map outside the atlas".into()));
            };
            let rad2 = km
                .tiles
                .iter()
                .map(|t| t.max_corner_dist2(&y))
                .max()
                .unwrap();
            if rad2 > r_c2 {
                continue;
            }
            if best[c]
                .as_ref()
                .map_or(true, |o| rad2 < o.containing_radius2)
            {
                best[c] = Some(Occurrence {
                    class: c,
                    center: *v,
                    containing_radius2: rad2,
                });
            }
        }
        let row: Vec<Occurrence> = best
            .into_iter()
            .enumerate()
            .map(|(c, o)| {
                o.ok_or_else(|| {
                    Error::BoundViolated(format!(
                        "class {c} not inside the r_c disc around σ³(class {p_idx})"
                    ))
                })
            })
            .collect::<Result<_>>()?;
        if p_idx == star_idx {
            let o = &row[star_idx];
            if o.containing_radius2 == r_c2 {
                tight = Some(o.clone());
            }
        }
        occurrences.push(row);
    }
    let tight = tight.ok_or_else(|| {
        Error::BoundViolated("star appearance radius does not attain r_c".into())
    })?;
    Ok(C0Report { occurrences, tight })
}

/// The index of the star class: the five-fat 0-map whose marks point
/// away from the centre.
pub fn star_class_index(atlases: &PenroseAtlases) -> Result<usize> {
    for (i, e) in atlases.labelled0.entries.iter().enumerate() {
        if e.tiles.len() == 5
            && e.tiles
                .iter()
                .all(|t| t.shape == crate::tile::Shape::Fat)
        {
            let marked_in = e
                .tiles
                .iter()
                .filter(|t| t.marked_corner() == Some(PlanarPoint::ORIGIN))
                .count();
            if marked_in == 0 {
                return Ok(i);
            }
        }
    }
    Err(Error::PreconditionViolated("no star class in atlas".into()))
}

/// The sun class: five fats marked at the centre.
pub fn sun_class_index(atlases: &PenroseAtlases) -> Result<usize> {
    for (i, e) in atlases.labelled0.entries.iter().enumerate() {
        if e.tiles.len() == 5
            && e.tiles
                .iter()
                .all(|t| t.marked_corner() == Some(PlanarPoint::ORIGIN))
        {
            return Ok(i);
        }
    }
    Err(Error::PreconditionViolated("no sun class in atlas".into()))
}

/// The patch P_A1: tiles of the canonical tiling inside the disc of
/// radius R_A1, within edge distance 1 of the π/5 cone.
#[derive(Clone, Debug)]
pub struct PatchA1 {
    pub patch: Patch,
    /// 1-map classes found with all tiles inside the patch, by canonical
    /// key.
    pub one_map_classes: usize,
    /// Tile count of a small subpatch containing all 15 classes, by
    /// greedy search.
    pub small_subpatch_tiles: usize,
    pub small_subpatch: Patch,
}

/// Builds P_A1 from a pruned canonical patch and enumerates the 1-maps
/// it contains.
pub fn extract_p_a1(atlases: &PenroseAtlases) -> Result<PatchA1> {
    let consts = compute_constants();
    // a rational radius certainly above R_A1
    let hi = consts.r_a1.interval.hi;
    let radius = GoldenNum::from_ratio((hi * 1000.0).ceil() as i128, 1000);
    let ambient = canonical_patch_in_disc(12, radius + GoldenNum::from_int(4))?;
    let r2 = radius * radius;

    // cone of angle π/5: y ≥ 0 and x ≥ (φ/2)·y in frame coordinates
    let in_cone = |p: &PlanarPoint| -> bool {
        let f = FramePoint::from_planar(p);
        f.y.signum() >= 0 && (f.x - GoldenNum::new(0, 1, 2) * f.y).signum() >= 0
    };
    let mut cone_vertices: HashSet<PlanarPoint> = HashSet::new();
    for v in ambient.vertices() {
        if in_cone(v) && dist2(v, &PlanarPoint::ORIGIN) <= r2 {
            cone_vertices.insert(*v);
        }
    }
    // tiles within edge distance 1 of the cone: a corner in the cone set
    // or adjacent to it
    let mut near: HashSet<PlanarPoint> = cone_vertices.clone();
    for v in &cone_vertices {
        for n in ambient.neighbors(v) {
            near.insert(*n);
        }
    }
    let tiles: Vec<RhombusTile> = ambient
        .tiles()
        .iter()
        .filter(|t| {
            t.max_corner_dist2(&PlanarPoint::ORIGIN) <= r2
                && t.corners().iter().any(|c| near.contains(c))
        })
        .copied()
        .collect();
    let patch = Patch::from_tiles_unchecked(tiles);

    // enumerate 1-maps fully contained in P_A1 (certified in the ambient
    // patch)
    let mut class_keys: HashSet<Vec<RhombusTile>> = HashSet::new();
    let mut occurrences: Vec<(Vec<RhombusTile>, PlanarPoint, KMap)> = Vec::new();
    let mut vs: Vec<PlanarPoint> = patch.vertices().copied().collect();
    vs.sort();
    for v in &vs {
        let Ok(km) = ambient.extract_kmap(v, 1) else {
            continue;
        };
        if km.tiles.iter().all(|t| patch.contains_tile(t)) {
            let key = km.canonical(EquivMode::Isometry).tiles;
            class_keys.insert(key.clone());
            occurrences.push((key, *v, km));
        }
    }

    // greedy small subpatch: for each candidate focus, gather the nearest
    // occurrence of every class and take the focus minimising the union
    let keys: Vec<Vec<RhombusTile>> = {
        let mut k: Vec<_> = class_keys.iter().cloned().collect();
        k.sort();
        k
    };
    let mut best: Option<Vec<RhombusTile>> = None;
    for (_, focus, _) in occurrences.iter().step_by(7) {
        let mut union: HashSet<RhombusTile> = HashSet::new();
        let mut ok = true;
        for key in &keys {
            let nearest = occurrences
                .iter()
                .filter(|(k2, _, _)| k2 == key)
                .min_by_key(|(_, c, _)| dist2(c, focus));
            match nearest {
                Some((_, _, km)) => union.extend(km.tiles.iter().copied()),
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            let mut tiles: Vec<RhombusTile> = union.into_iter().collect();
            tiles.sort();
            if best.as_ref().map_or(true, |b| tiles.len() < b.len()) {
                best = Some(tiles);
            }
        }
    }
    let small = best.ok_or_else(|| Error::BoundViolated("no subpatch covers all classes".into()))?;
    let _ = atlases;
    Ok(PatchA1 {
        one_map_classes: class_keys.len(),
        small_subpatch_tiles: small.len(),
        small_subpatch: Patch::from_tiles_unchecked(small),
        patch,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants_match_stated_bounds() {
        let c = compute_constants();
        // C1 ≈ 0.588, within ±0.001
        assert!(c.c1.interval.gt(0.587) && c.c1.interval.lt(0.589));
        assert!(c.c1.interval.width() < 1e-6);
        // r_v = 1 + φ exactly, and φ³/(2 sin 3π/10) agrees: 2 sin(3π/10) = φ
        assert_eq!(c.r_v.exact.unwrap(), GoldenNum::from_parts(1, 1));
        // r_c² = 19 + 30φ exactly, numerically inside (67.54, 67.55)
        assert_eq!(c.r_c.exact_square.unwrap(), GoldenNum::from_parts(19, 30));
        let sq = Interval::from_golden(&c.r_c.exact_square.unwrap());
        assert!(sq.gt(67.54) && sq.lt(67.55));
        // C_p < 29.830 with a sensible lower end
        assert!(c.c_p.interval.lt(29.830), "C_p hi = {}", c.c_p.interval.hi);
        assert!(c.c_p.interval.gt(29.0));
        assert!(c.c_p.interval.width() < 1e-6);
        // R_A1 < 86.57
        assert!(c.r_a1.interval.lt(86.57), "R_A1 hi = {}", c.r_a1.interval.hi);
        // C0 window ordered
        assert!(c.c0_lower.interval.hi <= c.c0_upper.interval.hi);
    }

    #[test]
    fn r_v_prime_is_circumradius() {
        // the half fat rhombus cut along the short diagonal has corners at
        // distance φ−1 from its circumcentre; verify on explicit points:
        // circumradius² = (φ−1)² = 2−φ
        let c = compute_constants();
        let r2 = c.r_v_prime.exact.unwrap() * c.r_v_prime.exact.unwrap();
        assert_eq!(r2, GoldenNum::from_parts(2, -1));
    }
}
