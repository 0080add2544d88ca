use discpack_core::constructions::*;
use discpack_core::density::delta_max;
use discpack_core::interval::Interval;

fn main() {
    for x in [0.3f64, 0.5, 0.75] {
        let t0 = std::time::Instant::now();
        let p = if x < 0.5 {
            column_packing(x, 200).unwrap()
        } else if x > 0.5 {
            tiling_to_packing(&column_tiling(x, 200).unwrap()).unwrap()
        } else {
            // x = 1/2: all-squares tiling
            tiling_to_packing(&column_tiling(0.5000001, 200).unwrap()).unwrap()
        };
        let build = t0.elapsed();
        let t1 = std::time::Instant::now();
        let d = measured_density(&p, 50.0);
        let meas = t1.elapsed();
        let target = delta_max(Interval::point(x)).unwrap().midpoint();
        println!(
            "x={x}: discs={} frac={:.4} density={:.6} delta={:.6} rel_err={:.4}% build={:?} measure={:?}",
            p.len(),
            p.large_fraction(),
            d.midpoint(),
            target,
            (d.midpoint() - target).abs() / target * 100.0,
            build,
            meas
        );
    }
}
