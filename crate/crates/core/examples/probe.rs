use penrose_core::localrules::*;
use std::time::Instant;

fn main() {
    let atlases = PenroseAtlases::compute().unwrap();
    let pairs = debug_candidate_periods();
    println!("{} period pairs", pairs.len());
    let t0 = Instant::now();
    for (i, (t1, t2)) in pairs.iter().enumerate() {
        if let Some(f) = debug_torus_search(t1, t2, &atlases, 60_000) {
            println!("FOUND at pair {}: periods {:?} {:?}, {} tiles, {:?}", i, t1, t2, f.len(), t0.elapsed());
            for t in &f { println!("  {:?}", t); }
            return;
        }
        if i % 200 == 199 { println!("... {} pairs, {:?}", i+1, t0.elapsed()); }
    }
    println!("exhausted, {:?}", t0.elapsed());
}
