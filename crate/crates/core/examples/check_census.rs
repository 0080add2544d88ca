use discpack_core::constructions::*;
use discpack_core::fm::{neighborhood_census, Regime};

fn main() {
    let x = 0.3f64;
    for extent in [150u32] {
        let p = column_packing(x, extent).unwrap();
        println!("extent {extent}: {} discs, frac {:.4}", p.len(), p.large_fraction());
        for w in [30.0, 60.0, 120.0] {
            let t = std::time::Instant::now();
            match neighborhood_census(&p, w) {
                Ok(c) => {
                    println!(
                        "  window {w}: interior {} bad_le {:.4} bad_ge {:.4} skipped {} ({:?})",
                        c.interior,
                        c.bad_fraction(Regime::XLeHalf),
                        c.bad_fraction(Regime::XGeHalf),
                        c.boundary_skipped,
                        t.elapsed()
                    );
                    // top words
                    let mut v: Vec<_> = c.counts.iter().collect();
                    v.sort_by_key(|(_, n)| std::cmp::Reverse(**n));
                    for ((class, word), n) in v.iter().take(8) {
                        println!("    {class} {word}: {n}");
                    }
                }
                Err(e) => println!("  window {w}: ERROR {e}"),
            }
        }
    }
}
