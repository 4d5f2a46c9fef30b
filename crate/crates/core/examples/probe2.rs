use penrose_core::localrules::*;
use penrose_core::lattice::{direction, FramePoint, PlanarPoint};
use penrose_core::tile::{RhombusTile, Shape};
use std::time::Instant;

fn main() {
    let atlases = PenroseAtlases::compute().unwrap();
    let w = |d: u8| direction(d);
    let x1 = w(9).add(&w(2));
    let seed = vec![
        RhombusTile::new(Shape::Fat, PlanarPoint::ORIGIN.sub(&w(0)), 0, None),
        RhombusTile::new(Shape::Fat, w(9), 2, None),
        RhombusTile::new(Shape::Thin, w(5), 9, None),
        RhombusTile::new(Shape::Fat, w(9), 0, None),
        RhombusTile::new(Shape::Thin, x1.add(&w(0)), 4, None),
    ];
    let base = w(0).add(&w(9));
    for mult in [2i64, 3] {
        let mut t1 = PlanarPoint::ORIGIN;
        for _ in 0..mult { t1 = t1.add(&base); }
        let pairs = debug_candidate_periods();
        let mut t2s: Vec<PlanarPoint> = Vec::new();
        for (a, b) in &pairs { for v in [a, b] { if !t2s.contains(v) { t2s.push(*v); } } }
        let t0 = Instant::now();
        println!("t1 = {}x(w0+w9), trying {} t2 vectors", mult, t2s.len());
        for t2 in &t2s {
            let f1 = FramePoint::from_planar(&t1);
            let f2 = FramePoint::from_planar(t2);
            let cross = (f1.x * f2.y - f1.y * f2.x).to_f64().abs() * 0.5877852522924731;
            if !(2.4 * mult as f64..=30.0).contains(&cross) { continue; }
            if let Some(f) = debug_torus_search_seeded(&t1, t2, &atlases, &seed, 200_000) {
                println!("FOUND: t1={mult}x(w0+w9) t2={:?}, {} tiles, {:?}", t2, f.len(), t0.elapsed());
                for t in &f { println!("  {:?}", t); }
                return;
            }
        }
        println!("  mult {} exhausted in {:?}", mult, t0.elapsed());
    }
}
