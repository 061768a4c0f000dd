//! Browser demo payloads: three interactive views over the core library,
//! each returning one JSON string ready for canvas plotting. The payload
//! builders are plain Rust (testable on any target); thin wasm-bindgen
//! wrappers at the bottom expose them to JavaScript. Built for the web with
//! `wasm-pack build --target web crates/web`.

use cvbench::benchmark::{cft_gaussian, cft_squeezed};
use cvbench::priors::{gaussian_theta_marginal, squeezing_marginal};
use cvbench::srm::srm_optimize_eta;
use cvbench::teleport::{fidelity_avg_closed, threshold_r, ThresholdOutcome, TwinBeamResource};

fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| (lo.ln() + (hi.ln() - lo.ln()) * i as f64 / (n - 1).max(1) as f64).exp())
        .collect()
}

fn lin_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1).max(1) as f64).collect()
}

/// Thresholds and the optimized square-root-measurement fidelity over a
/// log grid of prior widths β, at displacement width λ.
///
/// JSON: { betas, cft_gaussian, cft_squeezed, srm_value, srm_eta, gap }
pub fn benchmark_curves(
    lambda: f64,
    beta_min: f64,
    beta_max: f64,
    points: usize,
    srm_depth: usize,
) -> Result<String, String> {
    if !(beta_min > 0.0 && beta_max > beta_min && lambda >= 0.0) {
        return Err("need 0 < beta_min < beta_max and lambda >= 0".into());
    }
    let n = points.clamp(2, 400);
    let betas = log_grid(beta_min, beta_max, n);
    let mut gaussian = Vec::with_capacity(n);
    let mut squeezed = Vec::with_capacity(n);
    let mut srm_value = Vec::with_capacity(n);
    let mut srm_eta = Vec::with_capacity(n);
    let mut gap = Vec::with_capacity(n);
    for &beta in &betas {
        gaussian.push(cft_gaussian(lambda, beta));
        let cft = cft_squeezed(beta);
        squeezed.push(cft);
        let opt = srm_optimize_eta(beta, srm_depth.clamp(20, 400));
        srm_value.push(opt.value);
        srm_eta.push(opt.eta_star);
        gap.push(cft - opt.value);
    }
    Ok(serde_json::json!({
        "betas": betas,
        "cft_gaussian": gaussian,
        "cft_squeezed": squeezed,
        "srm_value": srm_value,
        "srm_eta": srm_eta,
        "gap": gap,
    })
    .to_string())
}

/// Average teleportation fidelity over a (β, r) grid with the two limiting
/// benchmarks, plus the resource threshold curves where each benchmark is
/// first beaten.
///
/// JSON: { betas, rs, fidelity (row-major over β then r), beats_lambda0,
///         beats_lambda_inf, threshold_lambda0, threshold_lambda_inf,
///         threshold_lambda0_db, threshold_lambda_inf_db }
pub fn teleport_map(
    beta_min: f64,
    beta_max: f64,
    beta_points: usize,
    r_max: f64,
    r_points: usize,
) -> Result<String, String> {
    if !(beta_min > 0.0 && beta_max > beta_min && r_max > 0.0) {
        return Err("need 0 < beta_min < beta_max and r_max > 0".into());
    }
    let nb = beta_points.clamp(2, 200);
    let nr = r_points.clamp(2, 200);
    let betas = log_grid(beta_min, beta_max, nb);
    let rs = lin_grid(0.0, r_max, nr);
    let mut fidelity = Vec::with_capacity(nb * nr);
    let mut beats0 = Vec::with_capacity(nb * nr);
    let mut beats_inf = Vec::with_capacity(nb * nr);
    let mut thr0 = Vec::with_capacity(nb);
    let mut thr_inf = Vec::with_capacity(nb);
    for &beta in &betas {
        let bench0 = cft_gaussian(0.0, beta);
        let bench_inf = cft_gaussian(f64::INFINITY, beta);
        for &r in &rs {
            let f = fidelity_avg_closed(beta, r).map_err(|e| e.to_string())?;
            fidelity.push(f);
            beats0.push(f > bench0);
            beats_inf.push(f > bench_inf);
        }
        for (lambda, acc) in [(0.0, &mut thr0), (f64::INFINITY, &mut thr_inf)] {
            let t = threshold_r(beta, lambda, 1e-4).map_err(|e| e.to_string())?;
            acc.push(match t {
                ThresholdOutcome::Beats(r) => Some(r),
                ThresholdOutcome::NeverBeats { .. } => None,
            });
        }
    }
    let db = |v: &Vec<Option<f64>>| -> Vec<Option<f64>> {
        v.iter().map(|o| o.map(|r| TwinBeamResource::new(r).to_db())).collect()
    };
    Ok(serde_json::json!({
        "betas": betas,
        "rs": rs,
        "fidelity": fidelity,
        "beats_lambda0": beats0,
        "beats_lambda_inf": beats_inf,
        "threshold_lambda0": thr0,
        "threshold_lambda_inf": thr_inf,
        "threshold_lambda0_db": db(&thr0),
        "threshold_lambda_inf_db": db(&thr_inf),
    })
    .to_string())
}

/// Phase-marginal prior density over (|α|, s) plus the squeezing marginal,
/// for the density explorer.
///
/// JSON: { xs, ss, density (row-major over x then s), s_marginal }
pub fn prior_density_map(
    lambda: f64,
    beta: f64,
    x_max: f64,
    s_max: f64,
    x_points: usize,
    s_points: usize,
) -> Result<String, String> {
    if !(lambda > 0.0 && lambda.is_finite() && beta > 0.0 && beta.is_finite()) {
        return Err("need finite positive lambda and beta".into());
    }
    if !(x_max > 0.0 && s_max > 0.0) {
        return Err("need positive plot ranges".into());
    }
    let nx = x_points.clamp(2, 400);
    let ns = s_points.clamp(2, 400);
    let xs = lin_grid(0.0, x_max, nx);
    let ss = lin_grid(0.0, s_max, ns);
    let mut density = Vec::with_capacity(nx * ns);
    for &x in &xs {
        for &s in &ss {
            density.push(gaussian_theta_marginal(x, s, lambda, beta));
        }
    }
    let s_marginal: Vec<f64> = ss.iter().map(|&s| squeezing_marginal(s, beta)).collect();
    Ok(serde_json::json!({
        "xs": xs,
        "ss": ss,
        "density": density,
        "s_marginal": s_marginal,
    })
    .to_string())
}

/// JavaScript-facing wrappers; string errors become JS exceptions.
#[cfg(target_arch = "wasm32")]
mod bindings {
    use wasm_bindgen::prelude::*;

    #[wasm_bindgen(js_name = benchmark_curves)]
    pub fn benchmark_curves(
        lambda: f64,
        beta_min: f64,
        beta_max: f64,
        points: usize,
        srm_depth: usize,
    ) -> Result<String, JsValue> {
        super::benchmark_curves(lambda, beta_min, beta_max, points, srm_depth)
            .map_err(|e| JsValue::from_str(&e))
    }

    #[wasm_bindgen(js_name = teleport_map)]
    pub fn teleport_map(
        beta_min: f64,
        beta_max: f64,
        beta_points: usize,
        r_max: f64,
        r_points: usize,
    ) -> Result<String, JsValue> {
        super::teleport_map(beta_min, beta_max, beta_points, r_max, r_points)
            .map_err(|e| JsValue::from_str(&e))
    }

    #[wasm_bindgen(js_name = prior_density_map)]
    pub fn prior_density_map(
        lambda: f64,
        beta: f64,
        x_max: f64,
        s_max: f64,
        x_points: usize,
        s_points: usize,
    ) -> Result<String, JsValue> {
        super::prior_density_map(lambda, beta, x_max, s_max, x_points, s_points)
            .map_err(|e| JsValue::from_str(&e))
    }
}
