use std::fmt::Write as _;
use std::time::{SystemTime, UNIX_EPOCH};

use cubkit::cubature::{minimal_rule, near_minimal_rule, verify_rule};
use cubkit::geometry::{check_node_region, region_curves, NodeRegionStatus, RegionCase};
use cubkit::interpolation::InterpolationOperator;
use cubkit::{Sigma, WeightSpec};

use crate::document::RuleDocument;
use crate::error::{CliError, CliResult, EXIT_OK, EXIT_SHORTFALL};
use crate::functions::TestFunction;
use crate::{CaseArg, InterpolateArgs, KindArg, LebesgueArgs, OutputFormat, RegionArgs, RuleArgs};

pub const DEFAULT_ORACLE_ORDER: usize = 96;
pub const ORACLE_ORDER_ENV: &str = "CUBKIT_ORACLE_ORDER";

/// Text for stdout (or `--out`), diagnostics for stderr, and the exit code.
pub struct Output {
    pub data: String,
    pub diagnostics: Vec<String>,
    pub code: u8,
}

impl Output {
    fn ok(data: String) -> Self {
        Output {
            data,
            diagnostics: Vec::new(),
            code: EXIT_OK,
        }
    }
}

/// `--oracle-order`, else the environment variable, else the default.
pub fn oracle_order(flag: Option<usize>, env: Option<&str>) -> CliResult<usize> {
    if let Some(k) = flag {
        return Ok(k);
    }
    match env {
        None => Ok(DEFAULT_ORACLE_ORDER),
        Some(v) => v.trim().parse().map_err(|_| {
            CliError::Usage(format!(
                "{ORACLE_ORDER_ENV}=`{v}` is not a positive integer"
            ))
        }),
    }
}

fn weight_spec(alpha: f64, beta: f64, sigma: f64) -> CliResult<WeightSpec> {
    let sigma = Sigma::from_value(sigma)?;
    Ok(WeightSpec::new(alpha, beta, sigma)?)
}

pub fn rule(args: &RuleArgs, env_order: Option<&str>) -> CliResult<Output> {
    let spec = weight_spec(args.alpha, args.beta, args.sigma)?;
    let rule = match args.kind {
        KindArg::NearMinimal => near_minimal_rule(spec, args.m)?,
        KindArg::Minimal => {
            if spec.sigma == Sigma::PlusHalf {
                return Err(CliError::Usage(
                    "minimal rules exist only for sigma = -0.5".into(),
                ));
            }
            minimal_rule(spec, args.m)?
        }
    };
    let mut doc = RuleDocument::from_rule(&rule);
    let mut diagnostics = Vec::new();
    let mut code = EXIT_OK;
    if let Some(d) = args.verify_degree {
        let order = oracle_order(args.oracle_order, env_order)?;
        let rep = verify_rule(&rule, d, order)?;
        doc.degree_verified = rep.max_exact_degree;
        doc.metadata.oracle_order = Some(order);
        diagnostics.push(format!(
            "{}: exact through degree {} (requested {d}), max residual {:e}",
            rep.rule_id,
            rep.max_exact_degree
                .map_or_else(|| "none".to_string(), |v| v.to_string()),
            rep.max_residual()
        ));
        if !rep.is_exact_through(d) {
            code = EXIT_SHORTFALL;
        }
    }
    if args.timestamp {
        doc.metadata.generated_at_unix = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .ok()
            .map(|t| t.as_secs());
    }
    let data = match args.format {
        OutputFormat::Json => doc.to_json()?,
        OutputFormat::Csv => doc.to_csv(),
    };
    Ok(Output {
        data,
        diagnostics,
        code,
    })
}

fn uniform_grid(g: usize) -> Vec<f64> {
    (0..g)
        .map(|i| -1.0 + 2.0 * i as f64 / (g - 1) as f64)
        .collect()
}

pub fn interpolate(args: &InterpolateArgs) -> CliResult<Output> {
    let f: TestFunction = args.function.parse().map_err(CliError::Usage)?;
    if args.grid < 2 {
        return Err(CliError::Usage(format!(
            "--grid must be at least 2 (got {})",
            args.grid
        )));
    }
    let spec = weight_spec(args.alpha, args.beta, -0.5)?;
    let op = InterpolationOperator::new(spec, args.m)?;
    let interp = op.interpolant(&op.sample(|x, y| f.eval(x, y)))?;
    let grid = uniform_grid(args.grid);
    let mut data = String::from(if args.error {
        "x,y,value,exact,error\n"
    } else {
        "x,y,value\n"
    });
    let mut max_err: f64 = 0.0;
    for &x in &grid {
        for &y in &grid {
            let v = interp.eval(x, y);
            if args.error {
                let exact = f.eval(x, y);
                let e = exact - v;
                max_err = max_err.max(e.abs());
                let _ = writeln!(data, "{x},{y},{v},{exact},{e}");
            } else {
                let _ = writeln!(data, "{x},{y},{v}");
            }
        }
    }
    let mut out = Output::ok(data);
    if args.error {
        out.diagnostics.push(format!("max_error={max_err:e}"));
    }
    Ok(out)
}

fn least_squares_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

pub fn lebesgue(args: &LebesgueArgs) -> CliResult<Output> {
    if args.m_list.is_empty() {
        return Err(CliError::Usage("--m-list is empty".into()));
    }
    let spec = weight_spec(args.alpha, args.beta, -0.5)?;
    let mut data = String::from("m,n,lambda\n");
    let mut ns = Vec::new();
    let mut lams = Vec::new();
    for &m in &args.m_list {
        let lam = InterpolationOperator::new(spec, m)?.lebesgue_constant(args.grid)?;
        let n = 2 * m + 1;
        let _ = writeln!(data, "{m},{n},{lam}");
        ns.push(n as f64);
        lams.push(lam);
    }
    let mut out = Output::ok(String::new());
    if lams.windows(2).any(|w| w[1] < w[0]) {
        out.diagnostics
            .push("note: Lebesgue constants are not monotone in m".into());
    }
    if args.fit {
        if ns.len() < 2 || ns.iter().any(|&n| n < 3.0) {
            return Err(CliError::Usage(
                "--fit needs at least two values of m, all ≥ 1".into(),
            ));
        }
        let log_lam: Vec<f64> = lams.iter().map(|v| v.ln()).collect();
        let max_ab = spec.alpha.max(spec.beta);
        let (regime, xs, expected) = if max_ab <= -0.5 {
            let xs: Vec<f64> = ns.iter().map(|n| n.ln().ln()).collect();
            ("log-squared", xs, 2.0)
        } else {
            let xs: Vec<f64> = ns.iter().map(|n| n.ln()).collect();
            ("power", xs, 2.0 * max_ab + 1.0)
        };
        let slope = least_squares_slope(&xs, &log_lam);
        let _ = write!(
            data,
            "\nfit,value\nregime,{regime}\nexpected_exponent,{expected}\nfitted_exponent,{slope}\nratio_last_first,{}\n",
            lams[lams.len() - 1] / lams[0]
        );
    }
    out.data = data;
    Ok(out)
}

pub fn region(args: &RegionArgs) -> CliResult<Output> {
    let spec = weight_spec(args.alpha, args.beta, -0.5)?;
    let case = match args.case {
        CaseArg::NearMinimal => RegionCase::NearMinimal,
        CaseArg::EvenDegree => RegionCase::EvenDegreeMinimal,
    };
    let curves = region_curves(args.m, spec.params(), args.samples, case)?;
    let mut data = String::from("record,label,x,y,status\n");
    let _ = writeln!(data, "angle,theta_1,{},,", curves.theta_1);
    let _ = writeln!(data, "angle,theta_m,{},,", curves.theta_m);
    for (name, pts) in [
        ("S1+", &curves.s1_plus),
        ("S1-", &curves.s1_minus),
        ("S2+", &curves.s2_plus),
        ("S2-", &curves.s2_minus),
    ] {
        for (x, y) in pts {
            let _ = writeln!(data, "curve,{name},{x},{y},");
        }
    }
    let mut out = Output::ok(String::new());
    if case == RegionCase::NearMinimal {
        let rule = near_minimal_rule(spec, args.m)?;
        let report = check_node_region(&rule, &curves)?;
        for (i, (n, s)) in rule.nodes.iter().zip(&report.status).enumerate() {
            let status = match s {
                NodeRegionStatus::Inside => "inside",
                NodeRegionStatus::Outside => "outside",
                NodeRegionStatus::DiagonalExempt => "diagonal",
            };
            let _ = writeln!(data, "node,{i},{},{},{status}", n.x, n.y);
        }
        if !report.all_inside {
            out.code = EXIT_SHORTFALL;
            out.diagnostics
                .push("some off-diagonal nodes lie outside the region".into());
        }
    }
    out.data = data;
    Ok(out)
}
