//! Exploratory harness used while bringing the solvers up; kept as a
//! cross-route smoke test on the reference configuration.

use comeq_core::market::{build_com_qp, ModelKind};
use comeq_core::presets::{market_preset, system_preset, MarketPreset, SystemPreset};
use comeq_core::scenarios::build_default_scenarios;
use comeq_core::solvers::{market_kkt_residual, solve_com, solve_com_via_kkt, solve_eqm};

#[test]
fn reference_pair_three_routes() {
    let sys = system_preset(SystemPreset::LL);
    let mkt = market_preset(MarketPreset::RiskL); // psi = 0
    let scen = build_default_scenarios(mkt.mu).unwrap();

    let t0 = std::time::Instant::now();
    let com = solve_com(&sys, &mkt, &scen).expect("COM solve");
    let t_com = t0.elapsed().as_secs_f64();

    let t0 = std::time::Instant::now();
    let com_kkt = solve_com_via_kkt(&sys, &mkt, &scen).expect("COM KKT solve");
    let t_kkt = t0.elapsed().as_secs_f64();

    let t0 = std::time::Instant::now();
    let eqm1 = solve_eqm(&sys, &mkt, &scen, 1.0).expect("EQM t=1 solve");
    let t_eqm1 = t0.elapsed().as_secs_f64();

    let t0 = std::time::Instant::now();
    let eqm0 = solve_eqm(&sys, &mkt, &scen, 0.0).expect("EQM t=0 solve");
    let t_eqm0 = t0.elapsed().as_secs_f64();

    eprintln!(
        "timings: com {t_com:.3}s kkt {t_kkt:.3}s eqm1 {t_eqm1:.3}s eqm0 {t_eqm0:.3}s"
    );
    eprintln!(
        "com:  d={:.4} y={:.4} obj={:.4} price={:.4} status={:?} iters={} resid={:.2e}",
        com.demand,
        com.wind_schedule,
        com.objective,
        com.da_price,
        com.report.status,
        com.report.iterations,
        com.report.residual
    );
    eprintln!(
        "kkt:  d={:.4} y={:.4} obj={:.4} price={:.4} status={:?} iters={} resid={:.2e}",
        com_kkt.demand,
        com_kkt.wind_schedule,
        com_kkt.objective,
        com_kkt.da_price,
        com_kkt.report.status,
        com_kkt.report.iterations,
        com_kkt.report.residual
    );
    eprintln!(
        "eqm1: d={:.4} y={:.4} obj={:.4} price={:.4} status={:?} fp_iters={}",
        eqm1.demand,
        eqm1.wind_schedule,
        eqm1.objective,
        eqm1.da_price,
        eqm1.report.status,
        eqm1.report.iterations
    );
    eprintln!(
        "eqm0: d={:.4} y={:.4} obj={:.4} price={:.4} status={:?} fp_iters={}",
        eqm0.demand,
        eqm0.wind_schedule,
        eqm0.objective,
        eqm0.da_price,
        eqm0.report.status,
        eqm0.report.iterations
    );

    // largest per-variable disagreement between the two COM routes
    let mut worst = 0.0f64;
    let mut worst_idx = 0;
    for (i, (a, b)) in com.primal.iter().zip(&com_kkt.primal).enumerate() {
        let d = (a - b).abs();
        if d > worst {
            worst = d;
            worst_idx = i;
        }
    }
    let program = build_com_qp(&sys, &mkt, &scen).unwrap();
    eprintln!(
        "com-vs-kkt: max primal diff {worst:.3e} at var {} ({})",
        worst_idx, program.qp.var_names[worst_idx]
    );
    eprintln!(
        "objective diff rel {:.3e}",
        (com.objective - com_kkt.objective).abs() / com.objective.abs()
    );
    // cross residuals: each route's point against the same program
    eprintln!(
        "kkt resid of qp-route {:.3e}, of lemke-route {:.3e}",
        market_kkt_residual(&program, &com),
        market_kkt_residual(&program, &com_kkt)
    );
    let mut worst_e = 0.0f64;
    let mut worst_e_idx = 0;
    for i in 0..com.primal.len().min(eqm1.primal.len()) {
        let d = (com.primal[i] - eqm1.primal[i]).abs();
        if d > worst_e {
            worst_e = d;
            worst_e_idx = i;
        }
    }
    eprintln!(
        "com-vs-eqm1: max primal diff {worst_e:.3e} at var {} ({})",
        worst_e_idx, program.qp.var_names[worst_e_idx]
    );

    assert_eq!(com.model, ModelKind::Com);
    assert!(com.report.status.is_optimal());
    assert!(com_kkt.report.status.is_optimal());
    assert!(eqm1.report.status.is_optimal());
    assert!(eqm0.report.status.is_optimal());
}
