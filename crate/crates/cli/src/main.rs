//! Command-line surface for the partition product library.
//!
//! Subcommands:
//!
//! * `partitions`: enumerate a partition class.
//! * `expand`: truncated q-series for any of the product expansions.
//! * `verify`: run named identity suites, or a one-off numeric
//!   route comparison when a weight and evaluation point are given.
//! * `zeta`: class products and fixed-length sums, with closed forms
//!   where the exponent admits one.
//! * `mzv`: distinct-part repeated-argument closed forms.
//! * `pi`: products converging to sin/sinh closed forms.
//! * `etaq`: layered quotient coefficients with a cross-path check.
//!
//! Exit codes: 0 success, 1 usage or evaluation error, 2 any identity
//! check reporting disagreement. JSON output has sorted keys and is
//! byte-identical across identical invocations.

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use serde_json::{json, Value};

use pzeta::numeric::bigfloat::BigFloat;
use pzeta::numeric::forms::eval_all_routes;
use pzeta::numeric::PrecisionContext;
use pzeta::parse::{parse_class, parse_layer, parse_rational, parse_weight};
use pzeta::partition::{count, enumerate, PartSpec, WeightFunction};
use pzeta::series::{
    cf_convergent, cf_convergent_dual, expand_distinct15, expand_distinct16, expand_distinct17,
    expand_form4, expand_form5, expand_form6, phi_series, sum_terms5, sum_terms6, QRing, QSeries,
};
use pzeta::verify::{run_matching, VerifyOptions};
use pzeta::zeta::{
    pi_formula, repeated_mzv_closed, repeated_zeta_closed, repeated_zeta_pair_closed, zeta_class,
    zeta_class_exact, zeta_fixed_length, ClosedForm, ZetaQuery,
};
use pzeta::{etaq, Error, Result};

#[derive(Parser)]
#[command(name = "pzeta", version, about = "Partition products and partition zeta functions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate the partitions of n in a class
    Partitions {
        /// Size to partition
        #[arg(long)]
        n: u64,
        /// Class string, e.g. "all", "finite:2,3,5;distinct", "mod:1,4;len:3"
        #[arg(long, default_value = "all")]
        class: String,
        #[arg(long)]
        json: bool,
    },
    /// Print a truncated q-series for one of the product expansions
    Expand {
        /// One of: product, reciprocal, form4, form5, form6, sum5, sum6,
        /// distinct15, distinct16, distinct17, cf, cf-dual
        #[arg(long)]
        form: String,
        /// Weight, e.g. "const:1", "pow:-2", "table:1=1,2=1/2;restrict:mod:1,2"
        #[arg(long, default_value = "const:1")]
        f: String,
        /// Truncation order
        #[arg(short = 'N', long, default_value_t = 30)]
        order: usize,
        #[arg(long)]
        json: bool,
    },
    /// Run identity suites, or one numeric route comparison with --f/--q
    Verify {
        /// Substring filter over suite names, e.g. "five-forms", "doubling"
        suite: Option<String>,
        /// Same filter as the positional argument
        #[arg(long, conflicts_with = "suite")]
        only: Option<String>,
        /// Weight for a one-off route comparison
        #[arg(long)]
        f: Option<String>,
        /// Evaluation point for the one-off comparison, rational in (-1, 1)
        #[arg(long)]
        q: Option<String>,
        /// Decimal digits of working precision
        #[arg(long, default_value_t = 50)]
        prec: u32,
        /// Formal truncation order
        #[arg(short = 'N', long, default_value_t = 30)]
        order: usize,
        /// Product truncation cap
        #[arg(long, default_value_t = 10_000)]
        cap: u64,
        /// Brute-force part cap for fixed-length sums
        #[arg(long = "part-cap", default_value_t = 10_000)]
        part_cap: u64,
        #[arg(long)]
        json: bool,
    },
    /// Partition zeta values over a class
    Zeta {
        /// Class string; ";len:k" selects the fixed-length sum
        #[arg(long)]
        class: String,
        /// Exponent, rational
        #[arg(long)]
        s: String,
        /// Weight each partition by (-1)^length
        #[arg(long)]
        signed: bool,
        #[arg(long, default_value_t = 50)]
        prec: u32,
        /// Product truncation cap for infinite part sets
        #[arg(long, default_value_t = 10_000)]
        cap: u64,
        #[arg(long = "part-cap", default_value_t = 10_000)]
        part_cap: u64,
        #[arg(long)]
        json: bool,
    },
    /// Closed form for the distinct length-k sum at exponent 2^t
    Mzv {
        #[arg(long)]
        t: u32,
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = 50)]
        prec: u32,
        #[arg(long)]
        json: bool,
    },
    /// Product over multiples of m at exponent 2^t against its closed form
    Pi {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        t: u32,
        /// Product truncation cap
        #[arg(long = "N", default_value_t = 10_000)]
        cap: u64,
        #[arg(long, default_value_t = 50)]
        prec: u32,
        #[arg(long)]
        json: bool,
    },
    /// Coefficients of a layered product quotient, cross-checked
    Etaq {
        /// Layer, e.g. "X=all;f=const:1;inner=-;exp=-1" (repeatable)
        #[arg(long = "layer")]
        layers: Vec<String>,
        #[arg(short = 'N', long, default_value_t = 30)]
        order: usize,
        #[arg(long)]
        json: bool,
    },
}

fn main() -> ExitCode {
    // die quietly when the read end of a pipe goes away, like cat does
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(command: Command) -> Result<u8> {
    match command {
        Command::Partitions { n, class, json } => partitions_cmd(n, &class, json),
        Command::Expand {
            form,
            f,
            order,
            json,
        } => expand_cmd(&form, &f, order, json),
        Command::Verify {
            suite,
            only,
            f,
            q,
            prec,
            order,
            cap,
            part_cap,
            json,
        } => {
            let opts = VerifyOptions {
                order,
                digits: prec,
                cap,
                part_cap,
            };
            if f.is_some() || q.is_some() {
                let filter = suite.or(only);
                if filter.as_deref().is_some_and(|s| !"five-forms-numeric".contains(s)) {
                    return Err(Error::Invalid(
                        "--f/--q run a numeric route comparison; the suite filter must \
                         match five-forms-numeric or be omitted"
                            .into(),
                    ));
                }
                let f = parse_weight(f.as_deref().unwrap_or("pow:-2"))?;
                let q = parse_rational(q.as_deref().unwrap_or("3/10"))?;
                routes_cmd(&f, &q, &opts, json)
            } else {
                verify_cmd(suite.or(only).as_deref(), &opts, json)
            }
        }
        Command::Zeta {
            class,
            s,
            signed,
            prec,
            cap,
            part_cap,
            json,
        } => {
            let class = parse_class(&class)?;
            let s = parse_rational(&s)?;
            let ctx = PrecisionContext::with_digits(prec)?;
            match class.fixed_length {
                Some(k) => {
                    if signed {
                        return Err(Error::Invalid(
                            "the sign weight is constant at fixed length; drop --signed".into(),
                        ));
                    }
                    fixed_length_cmd(&class.parts, &s, k, class.distinct, part_cap, &ctx, json)
                }
                None => product_cmd(class.parts, &s, class.distinct, signed, cap, &ctx, json),
            }
        }
        Command::Mzv { t, k, prec, json } => mzv_cmd(t, k, prec, json),
        Command::Pi {
            m,
            t,
            cap,
            prec,
            json,
        } => pi_cmd(m, t, cap, prec, json),
        Command::Etaq {
            layers,
            order,
            json,
        } => etaq_cmd(&layers, order, json),
    }
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

// =====================================================================
// partitions
// =====================================================================

const LIST_LIMIT: u32 = 100_000;

fn partitions_cmd(n: u64, class_str: &str, json: bool) -> Result<u8> {
    let class = parse_class(class_str)?;
    let total = count(n, &class);
    let listed = total <= BigUint::from(LIST_LIMIT);
    let lams = if listed {
        enumerate(n, &class)
    } else {
        Vec::new()
    };
    if json {
        print_json(&json!({
            "n": n,
            "class": class_str,
            "count": total.to_string(),
            "partitions": if listed {
                Value::from(
                    lams.iter()
                        .map(|l| Value::from(l.parts().to_vec()))
                        .collect::<Vec<_>>(),
                )
            } else {
                Value::Null
            },
        }));
    } else {
        println!("count: {total}");
        if !listed {
            println!("(listing suppressed above {LIST_LIMIT} partitions)");
        }
        for lam in &lams {
            if lam.parts().is_empty() {
                println!("()");
            } else {
                let joined = lam
                    .parts()
                    .iter()
                    .map(u64::to_string)
                    .collect::<Vec<_>>()
                    .join("+");
                println!("{joined}");
            }
        }
    }
    Ok(0)
}

// =====================================================================
// expand
// =====================================================================

fn expand_cmd(form: &str, f_str: &str, order: usize, json: bool) -> Result<u8> {
    let f = parse_weight(f_str)?;
    let series: QSeries = match form {
        "product" => phi_series(&QRing, &f, order)?,
        "reciprocal" => phi_series(&QRing, &f, order)?.reciprocal()?,
        "form4" => expand_form4(&QRing, &f, order)?,
        "form5" => expand_form5(&QRing, &f, order)?,
        "form6" => expand_form6(&QRing, &f, order)?,
        "sum5" => sum_terms5(&QRing, &f, order)?,
        "sum6" => sum_terms6(&QRing, &f, order)?,
        "distinct15" => expand_distinct15(&QRing, &f, order)?,
        "distinct16" => expand_distinct16(&QRing, &f, order)?,
        "distinct17" => expand_distinct17(&QRing, &f, order)?,
        "cf" => cf_convergent(&QRing, &f, order + 1, order)?,
        "cf-dual" => cf_convergent_dual(&QRing, &f, order + 1, order)?,
        other => {
            return Err(Error::Parse(format!(
                "unknown form {other:?}; expected one of product, reciprocal, form4, \
                 form5, form6, sum5, sum6, distinct15, distinct16, distinct17, cf, cf-dual"
            )))
        }
    };
    if json {
        print_json(&json!({
            "form": form,
            "f": f_str,
            "series": series.to_json(),
        }));
    } else {
        for n in 0..=series.order() {
            println!("q^{n}: {}", series.coeff(n));
        }
    }
    Ok(0)
}

// =====================================================================
// verify
// =====================================================================

fn verify_cmd(filter: Option<&str>, opts: &VerifyOptions, json: bool) -> Result<u8> {
    let reports = run_matching(filter, opts)?;
    let all_pass = reports.iter().all(|r| r.passed());
    if json {
        print_json(&json!({
            "passed": all_pass,
            "suites": reports.iter().map(|r| r.to_json()).collect::<Vec<_>>(),
        }));
    } else {
        for r in &reports {
            println!("[{}] {}", if r.passed() { "PASS" } else { "FAIL" }, r.suite);
            for c in &r.checks {
                if !c.passed {
                    println!("       {}: {}", c.name, c.detail);
                }
            }
        }
        println!(
            "{} of {} suites passed",
            reports.iter().filter(|r| r.passed()).count(),
            reports.len()
        );
    }
    Ok(if all_pass { 0 } else { 2 })
}

/// One-off numeric comparison of the evaluation routes at a given weight
/// and point. Routes agree when every pairwise gap fits inside the two
/// tail bounds involved.
fn routes_cmd(f: &WeightFunction, q: &BigRational, opts: &VerifyOptions, json: bool) -> Result<u8> {
    if q.abs() >= BigRational::from_integer(1.into()) {
        return Err(Error::Domain("the evaluation point needs |q| < 1".into()));
    }
    let ctx = PrecisionContext::with_digits(opts.digits)?;
    let ws = ctx.working_scale();
    let report = eval_all_routes(f, q, &ctx, opts.cap)?;
    let entries = report.entries();
    let slack = BigFloat::ulp_pow(ws.saturating_sub(5), ws);
    let mut agree = true;
    let mut max_gap = BigFloat::zero(ws);
    for (i, (_, a)) in entries.iter().enumerate() {
        for (_, b) in entries.iter().skip(i + 1) {
            let gap = a.abs_diff(b);
            let allowance = a.tail.bound().add(b.tail.bound()).add(&slack);
            if gap.cmp_abs(&allowance) == std::cmp::Ordering::Greater {
                agree = false;
            }
            if gap.cmp_abs(&max_gap) == std::cmp::Ordering::Greater {
                max_gap = gap;
            }
        }
    }
    if json {
        let mut routes = serde_json::Map::new();
        for (label, a) in &entries {
            routes.insert((*label).into(), a.to_json(&ctx));
        }
        print_json(&json!({
            "agrees": agree,
            "max_pairwise_gap": max_gap.to_sci_string(3),
            "q": q.to_string(),
            "routes": Value::Object(routes),
        }));
    } else {
        for (label, a) in &entries {
            println!(
                "{label:>22}: {}  (tail {})",
                a.value.to_decimal_string(ctx.digits()),
                a.tail.bound().to_sci_string(3)
            );
        }
        println!("max pairwise gap: {}", max_gap.to_sci_string(3));
        println!("verdict: {}", if agree { "agree" } else { "disagree" });
    }
    Ok(if agree { 0 } else { 2 })
}

// =====================================================================
// zeta
// =====================================================================

/// Closed form for the length-k sum when the exponent admits one: powers
/// of two go through the recursion, even exponents at k = 2 through the
/// pair identity. Errors from out-of-range table requests degrade to
/// "no closed form" rather than failing the query.
fn fixed_length_closed(
    parts: &PartSpec,
    s: &BigRational,
    k: usize,
    distinct: bool,
) -> Option<ClosedForm> {
    if *parts != PartSpec::All || !s.is_integer() || k > u32::MAX as usize {
        return None;
    }
    let si = s.to_integer().to_i64()?;
    if si < 2 {
        return None;
    }
    let closed = if si & (si - 1) == 0 {
        let t = si.trailing_zeros();
        if distinct {
            repeated_mzv_closed(t, k as u32)
        } else {
            repeated_zeta_closed(t, k as u32)
        }
    } else if !distinct && k == 2 && si % 2 == 0 {
        repeated_zeta_pair_closed(si as u32)
    } else {
        return None;
    };
    closed.ok()
}

fn fixed_length_cmd(
    parts: &PartSpec,
    s: &BigRational,
    k: usize,
    distinct: bool,
    part_cap: u64,
    ctx: &PrecisionContext,
    json: bool,
) -> Result<u8> {
    let closed = fixed_length_closed(parts, s, k, distinct);
    let brute = zeta_fixed_length(parts, s, k, distinct, part_cap, ctx)?;
    if json {
        print_json(&json!({
            "brute_force": brute.to_json(ctx),
            "closed": closed.as_ref().map(|c| c.to_string()),
            "closed_value": closed
                .as_ref()
                .map(|c| c.value(ctx).to_decimal_string(ctx.digits())),
            "distinct": distinct,
            "k": k,
            "s": s.to_string(),
        }));
    } else {
        if let Some(c) = &closed {
            println!("closed form: {c}");
            println!("           = {}", c.value(ctx).to_decimal_string(ctx.digits()));
        }
        println!(
            "length-{k} sum: {}  (tail {}{})",
            brute.value.to_decimal_string(ctx.digits()),
            brute.tail.bound().to_sci_string(3),
            if brute.tail.is_rigorous() {
                ""
            } else {
                ", heuristic"
            }
        );
        if let Some(c) = &closed {
            let gap = brute.value.sub(&c.value(ctx)).abs();
            println!("gap: {}", gap.to_sci_string(3));
        }
    }
    Ok(0)
}

fn product_cmd(
    parts: PartSpec,
    s: &BigRational,
    distinct: bool,
    signed: bool,
    cap: u64,
    ctx: &PrecisionContext,
    json: bool,
) -> Result<u8> {
    let mut query = ZetaQuery::new(parts, s.clone());
    if distinct {
        query = query.over_distinct();
    }
    if signed {
        query = query.sign_weighted();
    }
    let exact = if matches!(query.parts, PartSpec::Finite(_)) && s.is_integer() {
        Some(zeta_class_exact(&query)?)
    } else {
        None
    };
    let approx = zeta_class(&query, cap, ctx)?;
    if json {
        print_json(&json!({
            "approximation": approx.to_json(ctx),
            "exact": exact.as_ref().map(BigRational::to_string),
            "s": s.to_string(),
            "symbol": query.symbol(),
        }));
    } else {
        println!(
            "{}({}) = {}  (tail {})",
            query.symbol(),
            s,
            approx.value.to_decimal_string(ctx.digits()),
            approx.tail.bound().to_sci_string(3)
        );
        if let Some(e) = &exact {
            println!("exact: {e}");
        }
    }
    Ok(0)
}

// =====================================================================
// mzv / pi / etaq
// =====================================================================

fn mzv_cmd(t: u32, k: u32, prec: u32, json: bool) -> Result<u8> {
    let ctx = PrecisionContext::with_digits(prec)?;
    let closed = repeated_mzv_closed(t, k)?;
    if json {
        print_json(&json!({
            "closed": closed.to_string(),
            "coeff": closed.coeff.to_string(),
            "k": k,
            "pi_power": closed.pi_power,
            "t": t,
            "value": closed.value(&ctx).to_decimal_string(ctx.digits()),
        }));
    } else {
        println!("{closed}");
        println!("= {}", closed.value(&ctx).to_decimal_string(ctx.digits()));
    }
    Ok(0)
}

fn pi_cmd(m: u64, t: u32, cap: u64, prec: u32, json: bool) -> Result<u8> {
    let ctx = PrecisionContext::with_digits(prec)?;
    let r = pi_formula(m, t, cap, &ctx)?;
    if json {
        print_json(&json!({
            "agrees": r.agrees,
            "allowance": r.allowance.to_sci_string(3),
            "closed": r.closed.to_decimal_string(ctx.digits()),
            "gap": r.gap.to_sci_string(3),
            "label": r.label,
            "product": r.product.to_json(&ctx),
        }));
    } else {
        println!("{}", r.label);
        println!("closed:  {}", r.closed.to_decimal_string(ctx.digits()));
        println!(
            "product: {}  (terms {}, tail {})",
            r.product.value.to_decimal_string(ctx.digits()),
            r.product.terms_used,
            r.product.tail.bound().to_sci_string(3)
        );
        println!("gap: {}  allowance: {}", r.gap.to_sci_string(3), r.allowance.to_sci_string(3));
        println!("verdict: {}", if r.agrees { "agree" } else { "disagree" });
    }
    Ok(if r.agrees { 0 } else { 2 })
}

fn etaq_cmd(layer_strs: &[String], order: usize, json: bool) -> Result<u8> {
    if layer_strs.is_empty() {
        return Err(Error::Invalid("at least one --layer is required".into()));
    }
    let layers = layer_strs
        .iter()
        .map(|s| parse_layer(s))
        .collect::<Result<Vec<_>>>()?;
    let spec = etaq::QuotientSpec::new(layers, order)?;
    let nested = etaq::coeffs_nested(&spec)?;
    let direct = etaq::coeffs_direct(&spec)?;
    let agree = nested.coeffs() == direct.coeffs();
    if json {
        print_json(&json!({
            "coefficients": nested
                .coeffs()
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>(),
            "order": order,
            "paths_agree": agree,
        }));
    } else {
        for n in 0..=nested.order() {
            println!("q^{n}: {}", nested.coeff(n));
        }
        println!(
            "cross-check: {}",
            if agree { "agree" } else { "disagree" }
        );
    }
    Ok(if agree { 0 } else { 2 })
}
