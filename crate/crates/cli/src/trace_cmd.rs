//! Branch-trace table output: one row per grid multiplier with the point,
//! tangent, dual value, slope, and both curvature routes, tab separated and
//! ready for plotting.

use ballmin::branch::{fd_dual_second_derivative, trace_branch, BranchTraceConfig};
use ballmin::dual::{dual_first_derivative, dual_second_derivative, dual_value};
use ballmin::stationary::{multistart_solve, MultistartConfig};
use ballmin::{Error, Polynomial64};

use crate::report::real;
use crate::CliError;

pub struct TraceOptions {
    pub seed: u64,
    pub starts: Option<usize>,
    pub pair_index: usize,
    pub rho_window: Option<(f64, f64)>,
    pub step: Option<f64>,
}

pub fn run_trace(poly: &Polynomial64, opts: &TraceOptions) -> Result<String, CliError> {
    let n = poly.dimension();
    let mut ms = MultistartConfig::for_dimension(n);
    ms.seed = opts.seed;
    if let Some(starts) = opts.starts {
        ms.start_count = starts;
    }
    let set = multistart_solve(poly, &ms)?;
    let pair = set.pairs.get(opts.pair_index).ok_or_else(|| {
        CliError::input(format!(
            "pair index {} out of range: {} pairs found",
            opts.pair_index,
            set.pairs.len()
        ))
    })?;

    let mut cfg = match opts.step {
        Some(step) => BranchTraceConfig::around_with_step(pair.rho, step),
        None => BranchTraceConfig::around(pair.rho),
    };
    if let Some((lo, hi)) = opts.rho_window {
        cfg.rho_lo = lo;
        cfg.rho_hi = hi;
    }

    let trace = trace_branch(poly, pair, &cfg)?;
    if trace.truncated_low {
        eprintln!("warning: trace truncated below the seed (singular shifted hessian)");
    }
    if trace.truncated_high {
        eprintln!("warning: trace truncated above the seed (singular shifted hessian)");
    }

    let mut out = String::new();
    let x_cols: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
    let t_cols: Vec<String> = (0..n).map(|i| format!("tangent{i}")).collect();
    out.push_str(&format!(
        "rho\t{}\t{}\tdual_value\tdual_slope\tdual_curvature\tdual_curvature_fd\n",
        x_cols.join("\t"),
        t_cols.join("\t")
    ));

    for (i, point) in trace.points.iter().enumerate() {
        let value = dual_value(poly, &point.x, point.rho)?;
        let slope = dual_first_derivative(&point.x);
        let curvature = match dual_second_derivative(poly, &point.x, point.rho) {
            Ok(v) => real(v),
            Err(Error::SingularShiftedHessian) => "nan".to_string(),
            Err(e) => return Err(CliError::from(e)),
        };
        let fd = if i == 0 || i + 1 == trace.points.len() {
            "nan".to_string()
        } else {
            real(fd_dual_second_derivative(poly, &trace, point.rho)?)
        };
        let xs: Vec<String> = point.x.iter().map(|&v| real(v)).collect();
        let ts: Vec<String> = point.tangent.iter().map(|&v| real(v)).collect();
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
            real(point.rho),
            xs.join("\t"),
            ts.join("\t"),
            real(value),
            real(slope),
            curvature,
            fd
        ));
    }
    Ok(out)
}
