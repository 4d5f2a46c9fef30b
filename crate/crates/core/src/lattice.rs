//! The Z⁵ lattice behind Penrose tilings.
//!
//! Tiling vertices are integer combinations of the five unit vectors
//! u_k = (cos 2kπ/5, sin 2kπ/5), which satisfy u₀+…+u₄ = 0. A vertex is
//! therefore an integer 5-tuple modulo the all-ones vector; the canonical
//! representative has minimum coordinate 0. The lift of a vertex (its
//! point in Z⁵) is the same tuple without that reduction.
//!
//! Plane coordinates use the frame (1, 0) / (0, sin π/5): x-parts are exact
//! golden numbers, y-parts are golden numbers measured in units of sin π/5.
//! Squared distances are then x² + (3−φ)/4·y², exactly in Q(φ). The same
//! factoring makes the internal projection exact: its second axis is also
//! measured in units of sin π/5.

use crate::golden::GoldenNum;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// A point of Z⁵ — the lift of a tiling vertex.
pub type LatticePoint = [i64; 5];

/// A tiling-plane vertex: 5-tuple modulo (1,1,1,1,1), canonical form has
/// min coordinate 0.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PlanarPoint(pub [i64; 5]);

impl std::fmt::Debug for PlanarPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "({},{},{},{},{})",
            self.0[0], self.0[1], self.0[2], self.0[3], self.0[4]
        )
    }
}

/// π: Z⁵ → plane, with the all-ones kernel reduced away.
pub fn planar_embed(v: LatticePoint) -> PlanarPoint {
    PlanarPoint::new(v)
}

impl PlanarPoint {
    pub const ORIGIN: PlanarPoint = PlanarPoint([0; 5]);

    pub fn new(c: [i64; 5]) -> PlanarPoint {
        let m = *c.iter().min().unwrap();
        PlanarPoint([c[0] - m, c[1] - m, c[2] - m, c[3] - m, c[4] - m])
    }

    pub fn add(&self, o: &PlanarPoint) -> PlanarPoint {
        let a = &self.0;
        let b = &o.0;
        PlanarPoint::new([
            a[0] + b[0],
            a[1] + b[1],
            a[2] + b[2],
            a[3] + b[3],
            a[4] + b[4],
        ])
    }

    pub fn sub(&self, o: &PlanarPoint) -> PlanarPoint {
        let a = &self.0;
        let b = &o.0;
        PlanarPoint::new([
            a[0] - b[0],
            a[1] - b[1],
            a[2] - b[2],
            a[3] - b[3],
            a[4] - b[4],
        ])
    }

    pub fn neg(&self) -> PlanarPoint {
        let a = &self.0;
        PlanarPoint::new([-a[0], -a[1], -a[2], -a[3], -a[4]])
    }

    /// Representative lift with coordinate sum in {0,…,4}.
    pub fn lift_mod5(&self) -> LatticePoint {
        let s: i64 = self.0.iter().sum();
        let k = s.div_euclid(5);
        let mut v = self.0;
        for c in v.iter_mut() {
            *c -= k;
        }
        v
    }
}

/// Exact plane coordinates: (x, y·sin π/5).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FramePoint {
    pub x: GoldenNum,
    pub y: GoldenNum,
}

fn half(a: i64, b: i64) -> GoldenNum {
    GoldenNum::new(a as i128, b as i128, 2)
}

/// cos(2kπ/5) for k = 0..4.
fn cos_table(k: usize) -> GoldenNum {
    match k {
        0 => GoldenNum::ONE,
        1 | 4 => half(-1, 1), // (φ−1)/2
        _ => half(0, -1),     // −φ/2
    }
}

/// sin(2kπ/5)/sin(π/5) for k = 0..4.
fn sin_table(k: usize) -> GoldenNum {
    match k {
        0 => GoldenNum::ZERO,
        1 => GoldenNum::PHI,
        2 => GoldenNum::ONE,
        3 => -GoldenNum::ONE,
        _ => -GoldenNum::PHI,
    }
}

impl FramePoint {
    pub fn from_planar(p: &PlanarPoint) -> FramePoint {
        FramePoint::from_lattice(&p.0)
    }

    pub fn from_lattice(v: &LatticePoint) -> FramePoint {
        let mut x = GoldenNum::ZERO;
        let mut y = GoldenNum::ZERO;
        for k in 0..5 {
            if v[k] != 0 {
                let c = GoldenNum::from_int(v[k]);
                x += c * cos_table(k);
                y += c * sin_table(k);
            }
        }
        FramePoint { x, y }
    }

    /// Exact squared Euclidean length: x² + (3−φ)/4 · y².
    pub fn norm2(&self) -> GoldenNum {
        self.x * self.x + GoldenNum::new(3, -1, 4) * self.y * self.y
    }

    pub fn to_f64(&self) -> (f64, f64) {
        const SIN_PI_5: f64 = 0.5877852522924731;
        (self.x.to_f64(), self.y.to_f64() * SIN_PI_5)
    }
}

/// Exact squared Euclidean distance between two vertices.
pub fn dist2(a: &PlanarPoint, b: &PlanarPoint) -> GoldenNum {
    let d = a.sub(b);
    FramePoint::from_planar(&d).norm2()
}

/// Internal-space point (s, p₁, p₂): s along the coordinate-sum direction
/// (normalizer 1, i.e. s(v) = Σv_k for lattice points), p₁ along
/// (cos 4kπ/5)_k, p₂ along (sin 4kπ/5)_k in units of sin π/5.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct InternalPoint {
    pub s: GoldenNum,
    pub p1: GoldenNum,
    pub p2: GoldenNum,
}

/// cos(4kπ/5) for k = 0..4.
fn icos_table(k: usize) -> GoldenNum {
    match k {
        0 => GoldenNum::ONE,
        1 | 4 => half(0, -1), // −φ/2
        _ => half(-1, 1),     // (φ−1)/2
    }
}

/// sin(4kπ/5)/sin(π/5) for k = 0..4.
fn isin_table(k: usize) -> GoldenNum {
    match k {
        0 => GoldenNum::ZERO,
        1 => GoldenNum::ONE,
        2 => -GoldenNum::PHI,
        3 => GoldenNum::PHI,
        _ => -GoldenNum::ONE,
    }
}

/// π′: Z⁵ → internal 3-space, exact and linear.
pub fn internal_project(v: &LatticePoint) -> InternalPoint {
    let mut s = 0i64;
    let mut p1 = GoldenNum::ZERO;
    let mut p2 = GoldenNum::ZERO;
    for k in 0..5 {
        if v[k] != 0 {
            s += v[k];
            let c = GoldenNum::from_int(v[k]);
            p1 += c * icos_table(k);
            p2 += c * isin_table(k);
        }
    }
    InternalPoint {
        s: GoldenNum::from_int(s),
        p1,
        p2,
    }
}

/// Edge directions: w_d = e^{iπd/5} for d mod 10, as canonical tuples.
pub fn direction(d: u8) -> PlanarPoint {
    let d = (d % 10) as usize;
    let mut c = [0i64; 5];
    if d % 2 == 0 {
        c[d / 2] = 1;
    } else {
        c[(d + 5) % 10 / 2] = -1;
    }
    PlanarPoint::new(c)
}

/// Raw lattice step for direction d (±e_k, no canonicalization).
pub fn direction_step(d: u8) -> LatticePoint {
    let d = (d % 10) as usize;
    let mut c = [0i64; 5];
    if d % 2 == 0 {
        c[d / 2] = 1;
    } else {
        c[(d + 5) % 10 / 2] = -1;
    }
    c
}

/// An element of the dihedral group of order 20 acting on the tiling
/// plane: rotation by rot·π/5 (about the origin), optionally preceded by
/// the reflection across the x-axis.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Isometry {
    pub rot: u8, // 0..10
    pub mirror: bool,
}

impl Isometry {
    pub const IDENTITY: Isometry = Isometry {
        rot: 0,
        mirror: false,
    };

    /// All 20 group elements.
    pub fn all() -> impl Iterator<Item = Isometry> {
        (0..10u8).flat_map(|rot| {
            [false, true]
                .into_iter()
                .map(move |mirror| Isometry { rot, mirror })
        })
    }

    pub fn apply(&self, p: &PlanarPoint) -> PlanarPoint {
        let mut c = p.0;
        if self.mirror {
            // u_k ↦ u_{−k}
            c = [c[0], c[4], c[3], c[2], c[1]];
        }
        for _ in 0..self.rot {
            // rotation by π/5: coefficient of u_k moves per c'_k = −c_{k+2}
            c = [-c[2], -c[3], -c[4], -c[0], -c[1]];
        }
        PlanarPoint::new(c)
    }

    /// Image of the direction index under this isometry.
    pub fn apply_dir(&self, d: u8) -> u8 {
        let d = if self.mirror { (10 - d % 10) % 10 } else { d % 10 };
        (d + self.rot) % 10
    }
}

/// Multiplication by φ on the plane, as the exact lattice map
/// z ↦ −(S²z + S⁻²z) where S is the cyclic shift.
pub fn mul_phi(v: &LatticePoint) -> LatticePoint {
    let mut r = [0i64; 5];
    for (k, rk) in r.iter_mut().enumerate() {
        *rk = -(v[(k + 3) % 5] + v[(k + 2) % 5]);
    }
    r
}

/// φ·p for a reduced point (well-defined since M_φ(1̄) ∈ Z·1̄).
pub fn mul_phi_planar(p: &PlanarPoint) -> PlanarPoint {
    PlanarPoint::new(mul_phi(&p.0))
}

/// (φ − 1)·v = v/φ as a lattice map.
pub fn div_phi(v: &LatticePoint) -> LatticePoint {
    let m = mul_phi(v);
    [
        m[0] - v[0],
        m[1] - v[1],
        m[2] - v[2],
        m[3] - v[3],
        m[4] - v[4],
    ]
}

/// A cut-and-project scheme: the fixed Penrose slope (basis vectors of the
/// physical and internal spaces as golden 5-vectors) plus the intercept,
/// the coordinate sum of the affine offset. Integer intercepts give the
/// Penrose tilings; non-integer rational intercepts give generalized
/// Penrose tilings.
#[derive(Clone, Debug)]
pub struct ProjectionScheme {
    /// Rows spanning E: (cos 2kπ/5)_k and (sin 2kπ/5)_k/sin(π/5).
    pub physical_basis: [[GoldenNum; 5]; 2],
    /// Rows spanning E′: the all-ones sum direction, (cos 4kπ/5)_k and
    /// (sin 4kπ/5)_k/sin(π/5).
    pub internal_basis: [[GoldenNum; 5]; 3],
    /// Coordinate sum of the affine offset (rational; p-part is zero).
    pub intercept: GoldenNum,
}

impl ProjectionScheme {
    /// The canonical Penrose scheme, intercept 1/5·5 = 1 normalised to the
    /// window [0,5]: integer intercept, plane sections at integer sums.
    pub fn penrose() -> ProjectionScheme {
        ProjectionScheme::with_intercept(GoldenNum::ZERO)
    }

    /// The generic (generalized Penrose) scheme: any non-integer rational
    /// intercept; patterns do not depend on its value.
    pub fn generalized() -> ProjectionScheme {
        ProjectionScheme::with_intercept(GoldenNum::from_ratio(1, 3))
    }

    pub fn with_intercept(intercept: GoldenNum) -> ProjectionScheme {
        let mut physical = [[GoldenNum::ZERO; 5]; 2];
        let mut internal = [[GoldenNum::ZERO; 5]; 3];
        for k in 0..5 {
            physical[0][k] = cos_table(k);
            physical[1][k] = sin_table(k);
            internal[0][k] = GoldenNum::ONE;
            internal[1][k] = icos_table(k);
            internal[2][k] = isin_table(k);
        }
        ProjectionScheme {
            physical_basis: physical,
            internal_basis: internal,
            intercept,
        }
    }

    pub fn is_penrose_mode(&self) -> bool {
        self.intercept.is_rational() && self.intercept.den() == 1
    }

    /// Errors if the slope contains a line directed by an integer vector,
    /// i.e. if the internal projection has a nonzero rational kernel.
    pub fn check_nondegenerate(&self) -> Result<()> {
        // Each golden-linear equation Σ row_k·x_k = 0 over Q splits into
        // two rational equations (1- and φ-components). Gather the 6×5
        // rational system and compute its rank exactly.
        let mut rows: Vec<[i128; 5]> = Vec::new();
        for row in &self.internal_basis {
            let mut ra = [0i128; 5];
            let mut rb = [0i128; 5];
            // common denominator across the row
            let mut den: i128 = 1;
            for g in row.iter() {
                den = den / gcd_i128(den, g.den()) * g.den();
            }
            for (k, g) in row.iter().enumerate() {
                let m = den / g.den();
                ra[k] = g.a() * m;
                rb[k] = g.b() * m;
            }
            rows.push(ra);
            rows.push(rb);
        }
        if rational_rank(&mut rows) < 5 {
            return Err(Error::DegenerateScheme);
        }
        Ok(())
    }
}

fn gcd_i128(mut x: i128, mut y: i128) -> i128 {
    x = x.abs();
    y = y.abs();
    while y != 0 {
        let t = x % y;
        x = y;
        y = t;
    }
    if x == 0 {
        1
    } else {
        x
    }
}

/// Rank of an integer matrix by fraction-free Gaussian elimination.
fn rational_rank(rows: &mut Vec<[i128; 5]>) -> usize {
    let mut rank = 0;
    for col in 0..5 {
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        let p = rows[rank][col];
        for r in rank + 1..rows.len() {
            let q = rows[r][col];
            if q != 0 {
                for c in 0..5 {
                    rows[r][c] = rows[r][c] * p - rows[rank][c] * q;
                }
                // keep entries small
                let g = rows[r].iter().fold(0, |acc, &x| gcd_i128(acc, x).max(1));
                if g > 1 {
                    for c in rows[r].iter_mut() {
                        *c /= g;
                    }
                }
            }
        }
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix;

    #[test]
    fn all_ones_is_kernel() {
        assert_eq!(planar_embed([1, 1, 1, 1, 1]), PlanarPoint::ORIGIN);
        assert_eq!(planar_embed([1, 0, 0, 0, 0]), PlanarPoint([1, 0, 0, 0, 0]));
        assert_eq!(planar_embed([2, 1, 1, 1, 1]), PlanarPoint([1, 0, 0, 0, 0]));
    }

    #[test]
    fn embed_is_additive() {
        let mut rng = SplitMix::new(7);
        for _ in 0..200 {
            let mut u = [0i64; 5];
            let mut v = [0i64; 5];
            for k in 0..5 {
                u[k] = rng.i64_in(-20, 20);
                v[k] = rng.i64_in(-20, 20);
            }
            let sum = [
                u[0] + v[0],
                u[1] + v[1],
                u[2] + v[2],
                u[3] + v[3],
                u[4] + v[4],
            ];
            assert_eq!(planar_embed(sum), planar_embed(u).add(&planar_embed(v)));
        }
    }

    #[test]
    fn kernel_is_exactly_all_ones() {
        // a lattice vector embeds to the origin iff it is k·(1,1,1,1,1)
        let mut rng = SplitMix::new(8);
        for _ in 0..500 {
            let mut v = [0i64; 5];
            for c in v.iter_mut() {
                *c = rng.i64_in(-6, 6);
            }
            let zero = planar_embed(v) == PlanarPoint::ORIGIN;
            let allsame = v.iter().all(|&c| c == v[0]);
            assert_eq!(zero, allsame, "{v:?}");
        }
    }

    #[test]
    fn unit_edges() {
        for d in 0..10u8 {
            let p = direction(d);
            assert_eq!(dist2(&p, &PlanarPoint::ORIGIN), GoldenNum::ONE);
        }
    }

    #[test]
    fn dist2_examples() {
        let o = PlanarPoint::ORIGIN;
        assert_eq!(dist2(&o, &o), GoldenNum::ZERO);
        // thin rhombus short diagonal: w₁ − w₀, squared length 2 − φ
        let d = direction(1).sub(&direction(0));
        assert_eq!(dist2(&d, &o), GoldenNum::from_parts(2, -1));
        // fat rhombus long diagonal: w₀ + w₂, squared length 1 + φ
        let l = direction(0).add(&direction(2));
        assert_eq!(dist2(&l, &o), GoldenNum::from_parts(1, 1));
        // float cross-check for the short diagonal: 2 − 2cos(π/5)
        let exact = GoldenNum::from_parts(2, -1).to_f64();
        let float = 2.0 - 2.0 * (std::f64::consts::PI / 5.0).cos();
        assert!((exact - float).abs() < 1e-12);
    }

    #[test]
    fn dist2_invariant_under_isometries() {
        let mut rng = SplitMix::new(99);
        for _ in 0..200 {
            let mut a = [0i64; 5];
            let mut b = [0i64; 5];
            for k in 0..5 {
                a[k] = rng.i64_in(-10, 10);
                b[k] = rng.i64_in(-10, 10);
            }
            let (pa, pb) = (planar_embed(a), planar_embed(b));
            let d = dist2(&pa, &pb);
            for g in Isometry::all() {
                assert_eq!(dist2(&g.apply(&pa), &g.apply(&pb)), d);
            }
        }
    }

    #[test]
    fn rotation_acts_on_directions() {
        let r = Isometry {
            rot: 1,
            mirror: false,
        };
        for d in 0..10u8 {
            assert_eq!(r.apply(&direction(d)), direction((d + 1) % 10));
        }
        let m = Isometry {
            rot: 0,
            mirror: true,
        };
        for d in 0..10u8 {
            assert_eq!(m.apply(&direction(d)), direction((10 - d) % 10));
        }
        // group relations: r¹⁰ = id, m² = id
        let p = PlanarPoint::new([3, -1, 4, 0, 2]);
        let mut q = p;
        for _ in 0..10 {
            q = r.apply(&q);
        }
        assert_eq!(q, p);
        assert_eq!(m.apply(&m.apply(&p)), p);
    }

    #[test]
    fn internal_projection_is_linear_and_splits_sum() {
        assert_eq!(
            internal_project(&[0; 5]),
            InternalPoint {
                s: GoldenNum::ZERO,
                p1: GoldenNum::ZERO,
                p2: GoldenNum::ZERO
            }
        );
        // the sum direction has no p-part
        let ones = internal_project(&[1, 1, 1, 1, 1]);
        assert_eq!(ones.s, GoldenNum::from_int(5));
        assert!(ones.p1.is_zero() && ones.p2.is_zero());
        // basis image: cos 0 = 1, sin 0 = 0
        let e0 = internal_project(&[1, 0, 0, 0, 0]);
        assert_eq!(e0.s, GoldenNum::ONE);
        assert_eq!(e0.p1, GoldenNum::ONE);
        assert_eq!(e0.p2, GoldenNum::ZERO);
        // cos 4π/5 = −φ/2, units of sin π/5 for the p₂ axis
        let e1 = internal_project(&[0, 1, 0, 0, 0]);
        assert_eq!(e1.p1, GoldenNum::new(0, -1, 2));
        assert_eq!(e1.p2, GoldenNum::ONE);
    }

    #[test]
    fn mul_phi_scales_plane() {
        // φ·u₀ has frame coordinates (φ, 0)
        let m = mul_phi(&[1, 0, 0, 0, 0]);
        let f = FramePoint::from_lattice(&m);
        assert_eq!(f.x, GoldenNum::PHI);
        assert!(f.y.is_zero());
        // and div_phi inverts it on the plane
        let back = div_phi(&m);
        assert_eq!(planar_embed(back), planar_embed([1, 0, 0, 0, 0]));
    }

    #[test]
    fn scheme_nondegenerate() {
        ProjectionScheme::penrose().check_nondegenerate().unwrap();
        ProjectionScheme::generalized()
            .check_nondegenerate()
            .unwrap();
    }

    #[test]
    fn degenerate_scheme_detected() {
        // collapse the internal basis to rational rows: huge rational kernel
        let mut s = ProjectionScheme::penrose();
        s.internal_basis[1] = [GoldenNum::ONE; 5];
        s.internal_basis[2] = [GoldenNum::ONE; 5];
        assert!(matches!(
            s.check_nondegenerate(),
            Err(Error::DegenerateScheme)
        ));
    }

    #[test]
    fn lift_mod5() {
        let p = PlanarPoint::new([2, 1, 1, 1, 1]);
        let l = p.lift_mod5();
        let s: i64 = l.iter().sum();
        assert!((0..5).contains(&s));
        assert_eq!(planar_embed(l), p);
    }
}
