//! Scratch probe for scenario tuning. Not part of the deliverable surface.

use sapfsim::analysis::{dft_spectrum, power_metrics, thd};
use sapfsim::engine::{presets, run_scenario};
use std::time::Instant;

fn thd_of(window: &[f64], fs: f64) -> f64 {
    thd(&dft_spectrum(window, 50.0, fs, 50).unwrap()).unwrap()
}

fn main() {
    let t0 = Instant::now();
    let baseline = presets::rectifier_baseline(0.2);
    let run = run_scenario(&baseline).unwrap();
    let fs = run.sample_rate();
    let w = run.last_cycles("i_sa", 5).unwrap();
    println!(
        "baseline 200mH: THD = {:.4} ({} steps, {:.2?})",
        thd_of(w, fs),
        run.len(),
        t0.elapsed()
    );

    for (label, ideal) in [("ideal", true), ("switched", false)] {
        let t0 = Instant::now();
        let mut demo = presets::demo();
        demo.set_ideal_injection(ideal);
        let run = run_scenario(&demo).unwrap();
        let fs = run.sample_rate();
        let before = run.cycles_from("i_sa", 0.1, 5).unwrap();
        let after = run.last_cycles("i_sa", 5).unwrap();
        let v_before = run.cycles_from("v_pa", 0.1, 5).unwrap();
        let v_after = run.last_cycles("v_pa", 5).unwrap();
        let rb = power_metrics(v_before, before, 50.0, fs).unwrap();
        let ra = power_metrics(v_after, after, 50.0, fs).unwrap();
        let p_pv: f64 =
            run.last_cycles("p_pv", 5).unwrap().iter().sum::<f64>() / after.len() as f64;
        let v_dc_tail = run.last_cycles("v_dc", 5).unwrap();
        println!(
            "demo {label}: THD_before={:.4} THD_after={:.4} DPF_after={:.5} PF_after={:.5} p_pv={:.0}W v_dc={:.1} i1rms_after={:.2} ({:.2?})",
            rb.thd_i, ra.thd_i, ra.dpf, ra.pf, p_pv, v_dc_tail[v_dc_tail.len()-1], ra.i_rms, t0.elapsed()
        );

        // Power audit over the final 5 cycles.
        let demo_scenario = &demo;
        let window = run.samples_per_cycle() * 5;
        let n = run.len();
        let start = n - window;
        let ch = |name: &str| run.channel(name).unwrap();
        let mean_power3 = |va: &str, vb: &str, vc: &str, ia: &str, ib: &str, ic: &str| -> f64 {
            let (va, vb, vc) = (ch(va), ch(vb), ch(vc));
            let (ia, ib, ic) = (ch(ia), ch(ib), ch(ic));
            (start..n)
                .map(|k| va[k] * ia[k] + vb[k] * ib[k] + vc[k] * ic[k])
                .sum::<f64>()
                / window as f64
        };
        let p_src = mean_power3("v_pa", "v_pb", "v_pc", "i_sa", "i_sb", "i_sc");
        let p_rect = mean_power3("v_pa", "v_pb", "v_pc", "i_ra", "i_rb", "i_rc");
        let p_lin = mean_power3("v_pa", "v_pb", "v_pc", "i_lna", "i_lnb", "i_lnc");
        let p_pv_mean: f64 = (start..n).map(|k| ch("p_pv")[k]).sum::<f64>() / window as f64;
        let sapf = demo_scenario.sapf.unwrap();
        let pv = demo_scenario.pv.unwrap();
        let rect = demo_scenario.rectifier.unwrap();
        let lin = demo_scenario.linear.unwrap();
        let energy = |k: usize| -> f64 {
            let vdc = ch("v_dc")[k];
            let ifa = ch("i_fa")[k];
            let ifb = ch("i_fb")[k];
            let ifc = ch("i_fc")[k];
            let ipv = ch("i_pv")[k];
            let idc = ch("i_rect_dc")[k];
            let (la, lb, lc) = (ch("i_lna")[k], ch("i_lnb")[k], ch("i_lnc")[k]);
            0.5 * sapf.c_dc * vdc * vdc
                + 0.5 * sapf.l_f * (ifa * ifa + ifb * ifb + ifc * ifc)
                + 0.5 * pv.boost_l * ipv * ipv
                + 0.5 * rect.l_dc * idc * idc
                + 0.5 * lin.l * (la * la + lb * lb + lc * lc)
        };
        let de_dt = (energy(n - 1) - energy(start)) / ((window - 1) as f64 * run.dt());
        let residual = p_src + p_pv_mean - p_rect - p_lin - de_dt;
        let scale = (p_rect + p_lin).abs().max(p_src.abs());
        println!(
            "  audit: P_src={p_src:.1} P_pv={p_pv_mean:.1} P_rect={p_rect:.1} P_lin={p_lin:.1} dE/dt={de_dt:.1} residual={residual:.1} ({:.3}%)",
            100.0 * residual.abs() / scale
        );

        // KCL exactness.
        let mut worst: f64 = 0.0;
        for k in 0..n {
            for (s, l, f) in [
                ("i_sa", "i_la", "i_fa"),
                ("i_sb", "i_lb", "i_fb"),
                ("i_sc", "i_lc", "i_fc"),
            ] {
                let r = ch(s)[k] - (ch(l)[k] - ch(f)[k]);
                worst = worst.max(r.abs());
            }
        }
        println!("  KCL worst residual = {worst:e}");
    }
}
