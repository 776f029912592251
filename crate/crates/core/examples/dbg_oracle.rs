// debug: root under tolerance change and wronskian scales
use kgwell::oracle::*;
use kgwell::potential::PotentialParams;

fn polish(p: &PotentialParams, cfg: &IntegratorConfig, mut lo: f64, mut hi: f64) -> f64 {
    let mut flo = shooting_mismatch(lo, p, cfg).unwrap();
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        let fm = shooting_mismatch(mid, p, cfg).unwrap();
        if flo * fm <= 0.0 { hi = mid; } else { lo = mid; flo = fm; }
    }
    0.5 * (lo + hi)
}

fn main() {
    let p = PotentialParams::new(2.73, 0.5, -0.5).unwrap();
    let base_cfg = IntegratorConfig::default();
    let tight = IntegratorConfig { rel_tol: 5e-11, abs_tol: 5e-13, ..base_cfg };
    let b = polish(&p, &base_cfg, -0.985, -0.975);
    let t = polish(&p, &tight, -0.985, -0.975);
    println!("base  = {b:.15}");
    println!("tight = {t:.15}");
    println!("diff  = {:.3e}", (b - t).abs());
    println!("expected true root = -0.979086673180113");
    for e in [-0.9850, -0.9791, -0.9790] {
        println!("mismatch({e}) = {:.6e}", shooting_mismatch(e, &p, &base_cfg).unwrap());
    }
}
