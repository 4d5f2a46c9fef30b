//! Placed Penrose rhombi.
//!
//! A tile is (shape, anchor, orientation, optional label). The anchor is a
//! sharp corner (π/5 for thin, 2π/5 for fat); the orientation o gives the
//! directions of the two anchor edges, w_o and w_{o+1} (thin) or w_{o+2}
//! (fat), in multiples of π/5. The opposite sharp corner yields the same
//! rhombus with orientation o+5, so the canonical representative keeps
//! o in 0..5. A tile has 10 placements up to translation without labels
//! and 20 with labels.
//!
//! The label is a single marked corner: one of the two sharp corners of a
//! fat rhombus, one of the two obtuse corners of a thin one. This encodes
//! the classical arrow decorations: each edge derives a kind
//! (single/double) and a head endpoint from its tile's mark, and two tiles
//! match across a shared edge exactly when those agree.

use crate::lattice::{direction, dist2, Isometry, PlanarPoint};
use crate::golden::GoldenNum;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Shape {
    Fat,
    Thin,
}

impl Shape {
    /// Angular spread between the two anchor edges, in π/5 units.
    pub fn spread(&self) -> u8 {
        match self {
            Shape::Fat => 2,
            Shape::Thin => 1,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RhombusTile {
    pub shape: Shape,
    pub anchor: PlanarPoint,
    pub orient: u8,
    /// Marked-corner bit: fat — false = anchor, true = opposite sharp
    /// corner; thin — false = anchor+w_o, true = anchor+w_{o+1}.
    pub mark: Option<bool>,
}

impl std::fmt::Debug for RhombusTile {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{:?}@{:?}/o{}{}",
            self.shape,
            self.anchor,
            self.orient,
            match self.mark {
                None => String::new(),
                Some(m) => format!("/m{}", m as u8),
            }
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ArrowKind {
    Single,
    Double,
}

/// Label data a tile induces on one of its edges.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct EdgeLabel {
    pub kind: ArrowKind,
    pub head: PlanarPoint,
}

impl RhombusTile {
    /// Builds the canonical representative. Any orientation 0..10 is
    /// accepted; the mark bit refers to the representation passed in.
    pub fn new(shape: Shape, anchor: PlanarPoint, orient: u8, mark: Option<bool>) -> RhombusTile {
        let mut t = RhombusTile {
            shape,
            anchor,
            orient: orient % 10,
            mark,
        };
        if t.orient >= 5 {
            // re-anchor at the opposite sharp corner; both the anchor-edge
            // pair and the marked-corner bit flip
            let c = t.corners();
            t = RhombusTile {
                shape,
                anchor: c[2],
                orient: t.orient - 5,
                mark: mark.map(|m| !m),
            };
        }
        t
    }

    /// Corners in cyclic order: anchor A, B = A+w_o, C = A+w_o+w_{o+s},
    /// D = A+w_{o+s}.
    pub fn corners(&self) -> [PlanarPoint; 4] {
        let s = self.shape.spread();
        let wo = direction(self.orient);
        let ws = direction((self.orient + s) % 10);
        let a = self.anchor;
        let b = a.add(&wo);
        let d = a.add(&ws);
        let c = b.add(&ws);
        [a, b, c, d]
    }

    /// Corner angles in π/5 units, aligned with `corners()`.
    pub fn corner_angles(&self) -> [u8; 4] {
        match self.shape {
            Shape::Fat => [2, 3, 2, 3],
            Shape::Thin => [1, 4, 1, 4],
        }
    }

    /// The four edges, aligned so edge i joins corners i and i+1.
    pub fn edges(&self) -> [(PlanarPoint, PlanarPoint); 4] {
        let c = self.corners();
        [(c[0], c[1]), (c[1], c[2]), (c[2], c[3]), (c[3], c[0])]
    }

    /// The marked corner, if the tile is labelled.
    pub fn marked_corner(&self) -> Option<PlanarPoint> {
        let c = self.corners();
        self.mark.map(|m| match (self.shape, m) {
            (Shape::Fat, false) => c[0],
            (Shape::Fat, true) => c[2],
            (Shape::Thin, false) => c[1],
            (Shape::Thin, true) => c[3],
        })
    }

    /// Arrow data per edge (aligned with `edges()`), when labelled.
    ///
    /// Single arrows sit on the two edges at the marked corner with heads
    /// there. Double arrows sit on the other two edges; their head is the
    /// unmarked sharp corner for fat tiles and the sharp end of the edge
    /// for thin tiles. Two tiles match across a shared edge exactly when
    /// kind and head agree — the pairing realised by the substitution.
    pub fn edge_labels(&self) -> Option<[EdgeLabel; 4]> {
        let m = self.mark?;
        let c = self.corners();
        use ArrowKind::*;
        Some(match (self.shape, m) {
            // corners: A=c0 (sharp), B=c1 (obtuse), C=c2 (sharp), D=c3 (obtuse)
            (Shape::Fat, false) => [
                EdgeLabel { kind: Single, head: c[0] }, // A-B
                EdgeLabel { kind: Double, head: c[2] }, // B-C
                EdgeLabel { kind: Double, head: c[2] }, // C-D
                EdgeLabel { kind: Single, head: c[0] }, // D-A
            ],
            (Shape::Fat, true) => [
                EdgeLabel { kind: Double, head: c[0] },
                EdgeLabel { kind: Single, head: c[2] },
                EdgeLabel { kind: Single, head: c[2] },
                EdgeLabel { kind: Double, head: c[0] },
            ],
            (Shape::Thin, false) => [
                EdgeLabel { kind: Single, head: c[1] }, // A-B (B marked)
                EdgeLabel { kind: Single, head: c[1] }, // B-C
                EdgeLabel { kind: Double, head: c[2] }, // C-D (head: sharp end)
                EdgeLabel { kind: Double, head: c[0] }, // D-A
            ],
            (Shape::Thin, true) => [
                EdgeLabel { kind: Double, head: c[0] },
                EdgeLabel { kind: Double, head: c[2] },
                EdgeLabel { kind: Single, head: c[3] }, // C-D (D marked)
                EdgeLabel { kind: Single, head: c[3] },
            ],
        })
    }

    /// Label induced on a specific (unordered) edge, if present.
    pub fn label_on(&self, a: &PlanarPoint, b: &PlanarPoint) -> Option<EdgeLabel> {
        let labels = self.edge_labels()?;
        for (e, l) in self.edges().iter().zip(labels.iter()) {
            if (e.0 == *a && e.1 == *b) || (e.0 == *b && e.1 == *a) {
                return Some(*l);
            }
        }
        None
    }

    pub fn translate(&self, by: &PlanarPoint) -> RhombusTile {
        RhombusTile {
            anchor: self.anchor.add(by),
            ..*self
        }
    }

    pub fn translate_back(&self, by: &PlanarPoint) -> RhombusTile {
        RhombusTile {
            anchor: self.anchor.sub(by),
            ..*self
        }
    }

    /// Image under an isometry fixing the origin.
    pub fn apply_isometry(&self, g: &Isometry) -> RhombusTile {
        let s = self.shape.spread();
        let new_anchor = g.apply(&self.anchor);
        let new_orient = if g.mirror {
            // anchor-edge pair (o, o+s) maps to (g(o), g(o)−s); re-sort
            (g.apply_dir(self.orient) + 10 - s) % 10
        } else {
            g.apply_dir(self.orient)
        };
        let mut img = RhombusTile::new(self.shape, new_anchor, new_orient, None);
        if let Some(marked) = self.marked_corner() {
            // fix the bit on the canonical representative by matching the
            // transported marked corner
            let target = g.apply(&marked);
            img.mark = Some(false);
            if img.marked_corner() != Some(target) {
                img.mark = Some(true);
            }
            debug_assert_eq!(img.marked_corner(), Some(target));
        }
        img
    }

    pub fn erase_label(&self) -> RhombusTile {
        RhombusTile { mark: None, ..*self }
    }

    /// Squared circumradius bound helper: max squared distance from a
    /// point to any corner.
    pub fn max_corner_dist2(&self, from: &PlanarPoint) -> GoldenNum {
        self.corners()
            .iter()
            .map(|c| dist2(c, from))
            .max()
            .unwrap()
    }

    pub fn min_corner_dist2(&self, from: &PlanarPoint) -> GoldenNum {
        self.corners()
            .iter()
            .map(|c| dist2(c, from))
            .min()
            .unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::planar_embed;

    #[test]
    fn canonical_rep_folds_orientation() {
        let a = PlanarPoint::new([1, 0, 2, 0, 0]);
        let t = RhombusTile::new(Shape::Fat, a, 7, Some(false));
        assert!(t.orient < 5);
        // same rhombus both ways: corner sets agree
        let t2 = RhombusTile::new(Shape::Fat, a, 7, Some(false));
        let mut c1: Vec<_> = t.corners().to_vec();
        let mut c2: Vec<_> = t2.corners().to_vec();
        c1.sort();
        c2.sort();
        assert_eq!(c1, c2);
    }

    #[test]
    fn rep_flip_preserves_marked_corner() {
        for shape in [Shape::Fat, Shape::Thin] {
            for o in 0..10u8 {
                for m in [false, true] {
                    let t = RhombusTile::new(shape, PlanarPoint::ORIGIN, o, Some(m));
                    // rebuild from the opposite corner must give equal tile
                    let c = t.corners();
                    let opp = RhombusTile::new(shape, c[2], t.orient + 5, t.mark.map(|b| !b));
                    assert_eq!(t, opp);
                    assert_eq!(t.marked_corner(), opp.marked_corner());
                }
            }
        }
    }

    #[test]
    fn twenty_labelled_ten_unlabelled_prototypes() {
        use std::collections::HashSet;
        // count translation classes: shift each placed tile so its anchor
        // is at the origin
        let class = |t: RhombusTile| t.translate_back(&t.anchor);
        let mut labelled = HashSet::new();
        let mut unlabelled = HashSet::new();
        for shape in [Shape::Fat, Shape::Thin] {
            for o in 0..10u8 {
                for m in [false, true] {
                    labelled.insert(class(RhombusTile::new(
                        shape,
                        PlanarPoint::ORIGIN,
                        o,
                        Some(m),
                    )));
                }
                unlabelled.insert(class(RhombusTile::new(shape, PlanarPoint::ORIGIN, o, None)));
            }
        }
        assert_eq!(labelled.len(), 20);
        assert_eq!(unlabelled.len(), 10);
    }

    #[test]
    fn isometry_action_is_group_action() {
        let t = RhombusTile::new(
            Shape::Thin,
            planar_embed([2, -1, 0, 3, 1]),
            3,
            Some(true),
        );
        // identity
        assert_eq!(t.apply_isometry(&Isometry::IDENTITY), t);
        // r^10 = id
        let r = Isometry { rot: 1, mirror: false };
        let mut x = t;
        for _ in 0..10 {
            x = x.apply_isometry(&r);
        }
        assert_eq!(x, t);
        // m² = id
        let m = Isometry { rot: 0, mirror: true };
        assert_eq!(t.apply_isometry(&m).apply_isometry(&m), t);
        // corners map covariantly
        for g in Isometry::all() {
            let img = t.apply_isometry(&g);
            let mut want: Vec<_> = t.corners().iter().map(|c| g.apply(c)).collect();
            let mut got: Vec<_> = img.corners().to_vec();
            want.sort();
            got.sort();
            assert_eq!(want, got);
            assert_eq!(img.marked_corner(), Some(g.apply(&t.marked_corner().unwrap())));
        }
    }

    #[test]
    fn edge_labels_cover_all_edges() {
        let t = RhombusTile::new(Shape::Fat, PlanarPoint::ORIGIN, 2, Some(true));
        let labels = t.edge_labels().unwrap();
        let singles = labels.iter().filter(|l| l.kind == ArrowKind::Single).count();
        assert_eq!(singles, 2);
        // heads sit on actual edge endpoints
        for (e, l) in t.edges().iter().zip(labels.iter()) {
            assert!(l.head == e.0 || l.head == e.1);
        }
        // single heads at the marked corner for fat tiles
        let m = t.marked_corner().unwrap();
        for (e, l) in t.edges().iter().zip(labels.iter()) {
            if e.0 == m || e.1 == m {
                assert_eq!(l.kind, ArrowKind::Single);
                assert_eq!(l.head, m);
            }
        }
    }
}
