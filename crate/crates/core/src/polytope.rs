//! Exact convex polytopes over Q(φ): 3-dimensional cells with full face
//! structure (for the internal-space window and its subdivisions) and 2D
//! convex polygons (for the plane sections). All predicates are exact;
//! volumes and areas are exact golden numbers in the working coordinates.

use crate::golden::GoldenNum;
use crate::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Vec3G {
    pub x: GoldenNum,
    pub y: GoldenNum,
    pub z: GoldenNum,
}

impl std::fmt::Debug for Vec3G {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({:?},{:?},{:?})", self.x, self.y, self.z)
    }
}

impl Vec3G {
    pub const ZERO: Vec3G = Vec3G {
        x: GoldenNum::ZERO,
        y: GoldenNum::ZERO,
        z: GoldenNum::ZERO,
    };

    pub fn new(x: GoldenNum, y: GoldenNum, z: GoldenNum) -> Vec3G {
        Vec3G { x, y, z }
    }

    pub fn add(&self, o: &Vec3G) -> Vec3G {
        Vec3G::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }

    pub fn sub(&self, o: &Vec3G) -> Vec3G {
        Vec3G::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }

    pub fn scale(&self, s: &GoldenNum) -> Vec3G {
        Vec3G::new(self.x * *s, self.y * *s, self.z * *s)
    }

    pub fn dot(&self, o: &Vec3G) -> GoldenNum {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(&self, o: &Vec3G) -> Vec3G {
        Vec3G::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero() && self.z.is_zero()
    }
}

/// Closed half-space n·x ≤ c.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HalfSpace3 {
    pub n: Vec3G,
    pub c: GoldenNum,
}

impl HalfSpace3 {
    /// Canonical form: scaled so the first nonzero normal entry is ±1,
    /// leading entry positive. Makes equal planes structurally equal.
    pub fn canonical(&self) -> HalfSpace3 {
        let lead = [self.n.x, self.n.y, self.n.z]
            .into_iter()
            .find(|g| !g.is_zero());
        let Some(lead) = lead else { return *self };
        let inv = lead.inv().expect("nonzero");
        let s = if inv.signum() < 0 { -inv } else { inv };
        HalfSpace3 {
            n: self.n.scale(&s),
            c: self.c * s,
        }
    }

    pub fn side(&self, p: &Vec3G) -> i32 {
        (self.n.dot(p) - self.c).signum()
    }
}

/// A bounded convex 3-polytope: vertices plus faces as ordered vertex
/// index cycles.
#[derive(Clone, Debug)]
pub struct ConvexCell3 {
    pub verts: Vec<Vec3G>,
    pub faces: Vec<Vec<u32>>,
}

impl ConvexCell3 {
    /// Axis-aligned box.
    pub fn cuboid(lo: &Vec3G, hi: &Vec3G) -> ConvexCell3 {
        let v = |x: bool, y: bool, z: bool| Vec3G {
            x: if x { hi.x } else { lo.x },
            y: if y { hi.y } else { lo.y },
            z: if z { hi.z } else { lo.z },
        };
        // vertex order: bit pattern zyx
        let verts = vec![
            v(false, false, false),
            v(true, false, false),
            v(false, true, false),
            v(true, true, false),
            v(false, false, true),
            v(true, false, true),
            v(false, true, true),
            v(true, true, true),
        ];
        let faces = vec![
            vec![0, 2, 3, 1], // z = lo
            vec![4, 5, 7, 6], // z = hi
            vec![0, 1, 5, 4], // y = lo
            vec![2, 6, 7, 3], // y = hi
            vec![0, 4, 6, 2], // x = lo
            vec![1, 3, 7, 5], // x = hi
        ];
        ConvexCell3 { verts, faces }
    }

    pub fn contains(&self, p: &Vec3G) -> bool {
        self.face_planes()
            .iter()
            .all(|h| h.side(p) <= 0)
    }

    /// Outward face planes, derived from the stored cycles.
    pub fn face_planes(&self) -> Vec<HalfSpace3> {
        let centroid = self.centroid();
        self.faces
            .iter()
            .map(|f| {
                let n = self.face_normal(f);
                let c = n.dot(&self.verts[f[0] as usize]);
                // orient outward: centroid strictly inside
                if (n.dot(&centroid) - c).signum() > 0 {
                    HalfSpace3 {
                        n: Vec3G::ZERO.sub(&n),
                        c: -c,
                    }
                } else {
                    HalfSpace3 { n, c }
                }
            })
            .collect()
    }

    fn face_normal(&self, face: &[u32]) -> Vec3G {
        // face cycles may have collinear triples; find a non-degenerate one
        let a = &self.verts[face[0] as usize];
        for i in 1..face.len() - 1 {
            let b = &self.verts[face[i] as usize];
            let c = &self.verts[face[i + 1] as usize];
            let n = b.sub(a).cross(&c.sub(a));
            if !n.is_zero() {
                return n;
            }
        }
        Vec3G::ZERO
    }

    /// Average of the vertices (interior for a full-dimensional cell).
    pub fn centroid(&self) -> Vec3G {
        let mut s = Vec3G::ZERO;
        for v in &self.verts {
            s = s.add(v);
        }
        s.scale(&GoldenNum::from_ratio(1, self.verts.len() as i128))
    }

    /// Exact volume in working coordinates: cones from the centroid over
    /// every face. Face cycles may be arbitrarily oriented, so each face
    /// cone is taken by absolute value (the centroid is interior for
    /// full-dimensional cells).
    pub fn volume(&self) -> GoldenNum {
        let centroid = self.centroid();
        let mut six_vol = GoldenNum::ZERO;
        for f in &self.faces {
            let a = &self.verts[f[0] as usize];
            let mut cone = GoldenNum::ZERO;
            for i in 1..f.len() - 1 {
                let b = &self.verts[f[i] as usize];
                let c = &self.verts[f[i + 1] as usize];
                let av = a.sub(&centroid);
                let bv = b.sub(&centroid);
                let cv = c.sub(&centroid);
                cone += av.dot(&bv.cross(&cv));
            }
            six_vol += if cone.signum() < 0 { -cone } else { cone };
        }
        six_vol * GoldenNum::from_ratio(1, 6)
    }

    /// Intersection with n·x ≤ c. Returns None when the intersection has
    /// empty interior.
    pub fn clip(&self, h: &HalfSpace3) -> Option<ConvexCell3> {
        let signs: Vec<i32> = self.verts.iter().map(|v| h.side(v)).collect();
        if signs.iter().all(|&s| s <= 0) {
            return if signs.iter().any(|&s| s < 0) {
                Some(self.clone())
            } else {
                None // cell degenerate to start with
            };
        }
        if signs.iter().all(|&s| s >= 0) {
            return None;
        }
        // map kept vertices
        let mut new_index = vec![u32::MAX; self.verts.len()];
        let mut verts: Vec<Vec3G> = Vec::new();
        for (i, v) in self.verts.iter().enumerate() {
            if signs[i] <= 0 {
                new_index[i] = verts.len() as u32;
                verts.push(*v);
            }
        }
        // cut points per crossing edge
        use std::collections::HashMap;
        let mut cuts: HashMap<(u32, u32), u32> = HashMap::new();
        let mut cut_point = |a: u32, b: u32, verts: &mut Vec<Vec3G>| -> u32 {
            let key = if a < b { (a, b) } else { (b, a) };
            if let Some(&i) = cuts.get(&key) {
                return i;
            }
            let pa = &self.verts[a as usize];
            let pb = &self.verts[b as usize];
            let da = h.n.dot(pa) - h.c;
            let db = h.n.dot(pb) - h.c;
            let t = da / (da - db);
            let p = pa.add(&pb.sub(pa).scale(&t));
            let i = verts.len() as u32;
            verts.push(p);
            cuts.insert(key, i);
            i
        };
        let mut faces: Vec<Vec<u32>> = Vec::new();
        for face in &self.faces {
            let m = face.len();
            let mut out: Vec<u32> = Vec::new();
            for i in 0..m {
                let a = face[i];
                let b = face[(i + 1) % m];
                let (sa, sb) = (signs[a as usize], signs[b as usize]);
                if sa <= 0 {
                    out.push(new_index[a as usize]);
                }
                if (sa < 0 && sb > 0) || (sa > 0 && sb < 0) {
                    out.push(cut_point(a, b, &mut verts));
                }
            }
            out.dedup();
            while out.len() > 1 && out.first() == out.last() {
                out.pop();
            }
            if out.len() >= 3 {
                faces.push(out);
            }
        }
        // cap face: every vertex on the plane, in convex angular order
        let on_plane: Vec<u32> = (0..verts.len() as u32)
            .filter(|&i| (h.n.dot(&verts[i as usize]) - h.c).is_zero())
            .collect();
        if on_plane.len() >= 3 {
            if let Some(cap) = convex_cycle_in_plane(&verts, &on_plane, &h.n) {
                faces.push(cap);
            }
        }
        if verts.len() < 4 || faces.len() < 4 {
            return None;
        }
        let cell = ConvexCell3 { verts, faces };
        if cell.volume().is_zero() {
            return None;
        }
        Some(cell)
    }

    /// Both sides of a plane: (n·x ≤ c side, n·x ≥ c side).
    pub fn split(&self, n: &Vec3G, c: &GoldenNum) -> (Option<ConvexCell3>, Option<ConvexCell3>) {
        let below = self.clip(&HalfSpace3 { n: *n, c: *c });
        let above = self.clip(&HalfSpace3 {
            n: Vec3G::ZERO.sub(n),
            c: -*c,
        });
        (below, above)
    }

    /// Cross-section polygon with the plane n·x = c, as 3D points in
    /// cyclic order. None if the section has empty relative interior.
    pub fn section(&self, n: &Vec3G, c: &GoldenNum) -> Option<Vec<Vec3G>> {
        // clip to n·x ≤ c and read off the cap face (vertices with
        // n·x = c)
        let clipped = self.clip(&HalfSpace3 { n: *n, c: *c })?;
        for face in &clipped.faces {
            if face.len() >= 3
                && face
                    .iter()
                    .all(|&i| (n.dot(&clipped.verts[i as usize]) - *c).is_zero())
            {
                return Some(face.iter().map(|&i| clipped.verts[i as usize]).collect());
            }
        }
        None
    }
}

/// Orders coplanar points of a convex polygon into a cycle by exact
/// angular sort about their centroid.
fn convex_cycle_in_plane(verts: &[Vec3G], idx: &[u32], n: &Vec3G) -> Option<Vec<u32>> {
    // in-plane frame
    let axis = if !n.x.is_zero() || !n.y.is_zero() {
        Vec3G::new(GoldenNum::ZERO, GoldenNum::ZERO, GoldenNum::ONE)
    } else {
        Vec3G::new(GoldenNum::ONE, GoldenNum::ZERO, GoldenNum::ZERO)
    };
    let u = n.cross(&axis);
    if u.is_zero() {
        return None;
    }
    let w = n.cross(&u);
    let mut centroid = Vec3G::ZERO;
    for &i in idx {
        centroid = centroid.add(&verts[i as usize]);
    }
    centroid = centroid.scale(&GoldenNum::from_ratio(1, idx.len() as i128));
    let coords: Vec<(u32, GoldenNum, GoldenNum)> = idx
        .iter()
        .map(|&i| {
            let d = verts[i as usize].sub(&centroid);
            (i, u.dot(&d), w.dot(&d))
        })
        .collect();
    // degenerate (all collinear) caps have no area
    let half = |a: &GoldenNum, b: &GoldenNum| -> u8 {
        // 0 for upper half (b>0 or (b==0 && a>0)), 1 for lower
        match b.signum() {
            1 => 0,
            -1 => 1,
            _ => {
                if a.signum() >= 0 {
                    0
                } else {
                    1
                }
            }
        }
    };
    let mut sorted = coords;
    sorted.sort_by(|p, q| {
        let hp = half(&p.1, &p.2);
        let hq = half(&q.1, &q.2);
        hp.cmp(&hq).then_with(|| {
            // cross product comparison within a half-plane
            let cross = p.1 * q.2 - p.2 * q.1;
            match cross.signum() {
                1 => std::cmp::Ordering::Less,
                -1 => std::cmp::Ordering::Greater,
                _ => std::cmp::Ordering::Equal,
            }
        })
    });
    let cycle: Vec<u32> = sorted.iter().map(|(i, _, _)| *i).collect();
    // reject zero-area caps
    let mut area2 = GoldenNum::ZERO;
    for i in 0..sorted.len() {
        let (_, ax, ay) = &sorted[i];
        let (_, bx, by) = &sorted[(i + 1) % sorted.len()];
        area2 += *ax * *by - *bx * *ay;
    }
    if area2.is_zero() {
        None
    } else {
        Some(cycle)
    }
}

/// A convex polygon in exact plane coordinates, counterclockwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly2 {
    pub verts: Vec<(GoldenNum, GoldenNum)>,
}

impl Poly2 {
    pub fn new(mut verts: Vec<(GoldenNum, GoldenNum)>) -> Poly2 {
        // ensure counterclockwise
        let mut doubled = GoldenNum::ZERO;
        for i in 0..verts.len() {
            let (x1, y1) = verts[i];
            let (x2, y2) = verts[(i + 1) % verts.len()];
            doubled += x1 * y2 - x2 * y1;
        }
        if doubled.signum() < 0 {
            verts.reverse();
        }
        Poly2 { verts }
    }

    /// Twice the area (exact, in working coordinates).
    pub fn area2(&self) -> GoldenNum {
        let mut s = GoldenNum::ZERO;
        for i in 0..self.verts.len() {
            let (x1, y1) = self.verts[i];
            let (x2, y2) = self.verts[(i + 1) % self.verts.len()];
            s += x1 * y2 - x2 * y1;
        }
        if s.signum() < 0 {
            -s
        } else {
            s
        }
    }

    pub fn centroid(&self) -> (GoldenNum, GoldenNum) {
        let n = GoldenNum::from_ratio(1, self.verts.len() as i128);
        let mut x = GoldenNum::ZERO;
        let mut y = GoldenNum::ZERO;
        for (vx, vy) in &self.verts {
            x += *vx;
            y += *vy;
        }
        (x * n, y * n)
    }

    pub fn contains(&self, p: &(GoldenNum, GoldenNum)) -> bool {
        let n = self.verts.len();
        for i in 0..n {
            let (x1, y1) = self.verts[i];
            let (x2, y2) = self.verts[(i + 1) % n];
            let cross = (x2 - x1) * (p.1 - y1) - (y2 - y1) * (p.0 - x1);
            if cross.signum() < 0 {
                return false;
            }
        }
        true
    }

    /// Intersection with the half-plane n·x ≤ c; None when the interior
    /// is empty.
    pub fn clip(&self, nx: &GoldenNum, ny: &GoldenNum, c: &GoldenNum) -> Option<Poly2> {
        let side = |p: &(GoldenNum, GoldenNum)| (*nx * p.0 + *ny * p.1 - *c).signum();
        let n = self.verts.len();
        let mut out: Vec<(GoldenNum, GoldenNum)> = Vec::new();
        for i in 0..n {
            let a = self.verts[i];
            let b = self.verts[(i + 1) % n];
            let (sa, sb) = (side(&a), side(&b));
            if sa <= 0 {
                out.push(a);
            }
            if (sa < 0 && sb > 0) || (sa > 0 && sb < 0) {
                let da = *nx * a.0 + *ny * a.1 - *c;
                let db = *nx * b.0 + *ny * b.1 - *c;
                let t = da / (da - db);
                out.push((a.0 + (b.0 - a.0) * t, a.1 + (b.1 - a.1) * t));
            }
        }
        out.dedup();
        while out.len() > 1 && out.first() == out.last() {
            out.pop();
        }
        if out.len() < 3 {
            return None;
        }
        let poly = Poly2 { verts: out };
        if poly.area2().is_zero() {
            None
        } else {
            Some(poly)
        }
    }

    /// Both sides of the line n·x = c.
    pub fn split(
        &self,
        nx: &GoldenNum,
        ny: &GoldenNum,
        c: &GoldenNum,
    ) -> (Option<Poly2>, Option<Poly2>) {
        let below = self.clip(nx, ny, c);
        let above = self.clip(&-*nx, &-*ny, &-*c);
        (below, above)
    }
}

/// Builds a bounded cell as the intersection of half-spaces, starting
/// from a (generous) bounding box.
pub fn cell_from_halfspaces(bounds: &ConvexCell3, halves: &[HalfSpace3]) -> Result<ConvexCell3> {
    let mut cell = bounds.clone();
    for h in halves {
        cell = cell
            .clip(h)
            .ok_or_else(|| Error::InvalidPatch("empty half-space intersection".into()))?;
    }
    Ok(cell)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: i64) -> GoldenNum {
        GoldenNum::from_int(n)
    }

    fn unit_cube() -> ConvexCell3 {
        ConvexCell3::cuboid(
            &Vec3G::new(g(0), g(0), g(0)),
            &Vec3G::new(g(1), g(1), g(1)),
        )
    }

    #[test]
    fn cube_volume_and_faces() {
        let c = unit_cube();
        assert_eq!(c.volume(), GoldenNum::ONE);
        assert_eq!(c.faces.len(), 6);
        assert!(c.contains(&Vec3G::new(
            GoldenNum::from_ratio(1, 2),
            GoldenNum::from_ratio(1, 2),
            GoldenNum::from_ratio(1, 2)
        )));
        assert!(!c.contains(&Vec3G::new(g(2), g(0), g(0))));
    }

    #[test]
    fn clip_cube_in_half() {
        let c = unit_cube();
        let h = HalfSpace3 {
            n: Vec3G::new(g(1), g(0), g(0)),
            c: GoldenNum::from_ratio(1, 2),
        };
        let half = c.clip(&h).unwrap();
        assert_eq!(half.volume(), GoldenNum::from_ratio(1, 2));
        // clip along a corner plane: x + y + z ≤ 1/2 is a tetrahedron
        let h2 = HalfSpace3 {
            n: Vec3G::new(g(1), g(1), g(1)),
            c: GoldenNum::from_ratio(1, 2),
        };
        let tet = c.clip(&h2).unwrap();
        // volume (1/2)³/6 = 1/48
        assert_eq!(tet.volume(), GoldenNum::from_ratio(1, 48));
        // split volumes sum to the whole
        let (lo, hi) = c.split(&Vec3G::new(g(1), g(1), g(1)), &GoldenNum::from_ratio(1, 2));
        assert_eq!(
            lo.unwrap().volume() + hi.unwrap().volume(),
            GoldenNum::ONE
        );
    }

    #[test]
    fn clip_outside_and_tangent() {
        let c = unit_cube();
        let away = HalfSpace3 {
            n: Vec3G::new(g(1), g(0), g(0)),
            c: g(-1),
        };
        assert!(c.clip(&away).is_none());
        let tangent = HalfSpace3 {
            n: Vec3G::new(g(1), g(0), g(0)),
            c: g(0),
        };
        assert!(c.clip(&tangent).is_none(), "face-tangent clip is measure zero");
        let containing = HalfSpace3 {
            n: Vec3G::new(g(1), g(0), g(0)),
            c: g(5),
        };
        assert_eq!(c.clip(&containing).unwrap().volume(), GoldenNum::ONE);
    }

    #[test]
    fn section_of_cube() {
        let c = unit_cube();
        let s = c
            .section(&Vec3G::new(g(0), g(0), g(1)), &GoldenNum::from_ratio(1, 2))
            .unwrap();
        assert_eq!(s.len(), 4);
        // corner section: x+y+z = 1/2 is a triangle
        let t = c
            .section(&Vec3G::new(g(1), g(1), g(1)), &GoldenNum::from_ratio(1, 2))
            .unwrap();
        assert_eq!(t.len(), 3);
    }

    #[test]
    fn poly2_clip_and_area() {
        let sq = Poly2::new(vec![
            (g(0), g(0)),
            (g(2), g(0)),
            (g(2), g(2)),
            (g(0), g(2)),
        ]);
        assert_eq!(sq.area2(), g(8));
        let (a, b) = sq.split(&g(1), &g(0), &g(1));
        assert_eq!(a.unwrap().area2() + b.unwrap().area2(), g(8));
        // diagonal cut
        let (a, b) = sq.split(&g(1), &g(1), &g(2));
        assert_eq!(a.unwrap().area2() + b.unwrap().area2(), g(8));
        assert!(sq.clip(&g(1), &g(0), &g(-1)).is_none());
        assert!(sq.contains(&(g(1), g(1))));
        assert!(!sq.contains(&(g(3), g(1))));
    }
}
