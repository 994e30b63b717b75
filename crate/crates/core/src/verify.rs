//! Named verification suites: every identity the library implements,
//! checked against its independent oracle, reported uniformly.
//!
//! Each suite is a list of pass/fail checks with human-readable detail;
//! suites are pure functions of their options, so repeated runs produce
//! identical reports. The command-line `verify` subcommand and the
//! acceptance tests both drive these.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::etaq::{coeffs_direct, coeffs_nested, ProductLayer, QuotientSpec};
use crate::numeric::bigfloat::BigFloat;
use crate::numeric::forms::eval_all_routes;
use crate::numeric::PrecisionContext;
use crate::partition::{partition_counts_pentagonal, PartSpec, WeightFunction};
use crate::series::{
    cf_convergent, cf_convergent_dual, congruence_check, expand_distinct15, expand_distinct16,
    expand_distinct17, expand_form4, expand_form5, expand_form6, phi_series, sum_terms5,
    sum_terms6, z_marker_extract, QRing, QSeries, ZPolyRing,
};
use crate::zeta::{
    cubic_cosh_checks, dirichlet_extract, doubling_exact, doubling_series_check, pi_formula,
    repeated_mzv_4_factorials, repeated_mzv_8_factorials, repeated_mzv_closed,
    repeated_zeta_4_products, repeated_zeta_closed, repeated_zeta_pair, repeated_zeta_pair_closed,
    telescoping_check, zeta_class, zeta_fixed_length, ZetaQuery,
};
use crate::{Error, Result};

// =====================================================================
// Report types
// =====================================================================

#[derive(Clone, Debug)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub suite: &'static str,
    pub checks: Vec<CheckResult>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "suite": self.suite,
            "passed": self.passed(),
            "checks": self.checks.iter().map(|c| json!({
                "name": c.name,
                "passed": c.passed,
                "detail": c.detail,
            })).collect::<Vec<_>>(),
        })
    }
}

/// Shared knobs. The defaults match the documented command-line defaults:
/// order 30, 50 digits, product cap 10^4, brute-force part cap 10^4.
#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub order: usize,
    pub digits: u32,
    pub cap: u64,
    pub part_cap: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            order: 30,
            digits: 50,
            cap: 10_000,
            part_cap: 10_000,
        }
    }
}

impl VerifyOptions {
    fn ctx(&self) -> Result<PrecisionContext> {
        PrecisionContext::with_digits(self.digits)
    }
}

/// Every suite name, in report order.
pub const SUITES: [&str; 16] = [
    "partition-counts",
    "five-forms-formal",
    "five-forms-numeric",
    "dual-forms",
    "pi-products",
    "repeated-exponent-2",
    "repeated-exponent-4",
    "mzv",
    "pair-shuffle",
    "doubling",
    "cubic-product",
    "sinh-product",
    "eta-quotients",
    "congruences",
    "golden-z",
    "telescoping",
];

/// Run one suite by name.
pub fn run_suite(name: &str, opts: &VerifyOptions) -> Result<SuiteReport> {
    match name {
        "partition-counts" => partition_counts_suite(opts),
        "five-forms-formal" => five_forms_formal_suite(opts),
        "five-forms-numeric" => five_forms_numeric_suite(opts),
        "dual-forms" => dual_forms_suite(opts),
        "pi-products" => pi_products_suite(opts),
        "repeated-exponent-2" => repeated_exponent_2_suite(opts),
        "repeated-exponent-4" => repeated_exponent_4_suite(opts),
        "mzv" => mzv_suite(opts),
        "pair-shuffle" => pair_shuffle_suite(opts),
        "doubling" => doubling_suite(opts),
        "cubic-product" => cubic_product_suite(opts),
        "sinh-product" => sinh_product_suite(opts),
        "eta-quotients" => eta_quotients_suite(opts),
        "congruences" => congruences_suite(opts),
        "golden-z" => golden_z_suite(opts),
        "telescoping" => telescoping_suite(opts),
        other => Err(Error::Invalid(format!("unknown suite: {other}"))),
    }
}

/// Run the suites whose name contains `filter` (all of them when absent).
pub fn run_matching(filter: Option<&str>, opts: &VerifyOptions) -> Result<Vec<SuiteReport>> {
    let mut out = Vec::new();
    for name in SUITES {
        if filter.map_or(true, |f| name.contains(f)) {
            out.push(run_suite(name, opts)?);
        }
    }
    if out.is_empty() {
        return Err(Error::Invalid(format!(
            "no suite matches {:?}",
            filter.unwrap_or("")
        )));
    }
    Ok(out)
}

// =====================================================================
// Shared helpers
// =====================================================================

fn check(name: &'static str, passed: bool, detail: String) -> CheckResult {
    CheckResult {
        name,
        passed,
        detail,
    }
}

fn le(a: &BigFloat, b: &BigFloat) -> bool {
    a.cmp_abs(b) != Ordering::Greater
}

fn series_equal(a: &QSeries, b: &QSeries) -> bool {
    a.coeffs() == b.coeffs()
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn big(n: i64) -> BigRational {
    BigRational::from(BigInt::from(n))
}

/// Deterministic pseudo-random stream for the randomized-weight suites.
struct Lcg(u64);

impl Lcg {
    fn next(&mut self) -> u64 {
        self.0 = self
            .0
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        self.0 >> 33
    }
}

/// A small exact weight: constants, powers, tables, restrictions.
fn sample_weight(rng: &mut Lcg) -> WeightFunction {
    match rng.next() % 4 {
        0 => WeightFunction::Constant(rat(
            (rng.next() % 9) as i64 - 4,
            1 + (rng.next() % 4) as i64,
        )),
        1 => WeightFunction::Power((rng.next() % 5) as i64 - 2),
        2 => WeightFunction::Table(
            (1..=8)
                .map(|k| (k, rat((rng.next() % 7) as i64 - 3, 1 + (rng.next() % 3) as i64)))
                .collect(),
        ),
        _ => {
            let set = match rng.next() % 3 {
                0 => PartSpec::Multiples(2 + rng.next() % 3),
                1 => PartSpec::ArithProg {
                    a: 1,
                    m: 2 + rng.next() % 3,
                },
                _ => PartSpec::GreaterEq(2 + rng.next() % 4),
            };
            WeightFunction::Restricted(Box::new(WeightFunction::Power(1)), set)
        }
    }
}

// =====================================================================
// Suites
// =====================================================================

/// Coefficients of 1/phi(1) against the pentagonal recurrence, exactly.
fn partition_counts_suite(opts: &VerifyOptions) -> Result<SuiteReport> {
    let order = opts.order.max(40);
    let series = phi_series(&QRing, &WeightFunction::one(), order)?.reciprocal()?;
    let table = partition_counts_pentagonal(order as u64);
    let mut bad = None;
    for n in 0..=order {
        let want = BigRational::from(BigInt::from(table[n].clone()));
        if series.coeff(n) != &want {
            bad = Some(n);
            break;
        }
    }
    Ok(SuiteReport {
        suite: "partition-counts",
        checks: vec![check(
            "reciprocal-product-counts-partitions",
            bad.is_none(),
            match bad {
                None => format!("orders 0..={order} all exact"),
                Some(n) => format!("first mismatch at q^{n}"),
            },
        )],
    })
}

/// The reciprocal product against its four other formal expansions,
/// coefficientwise, for a batch of randomized exact weights.
fn five_forms_formal_suite(opts: &VerifyOptions) -> Result<SuiteReport> {
    let order = opts.order;
    let mut rng = Lcg(0x5eed_0001);
    let mut checks = Vec::new();
    let mut worst: [Option<usize>; 4] = [None; 4];
    for trial in 0..20 {
        let f = sample_weight(&mut rng);
        let base = phi_series(&QRing, &f, order)?.reciprocal()?;
        let routes: [QSeries; 4] = [
            expand_form4(&QRing, &f, order)?,
            expand_form5(&QRing, &f, order)?,
            expand_form6(&QRing, &f, order)?,
            cf_convergent(&QRing, &f, order + 1, order)?,
        ];
        for (i, r) in routes.iter().enumerate() {
            if !series_equal(r, &base) && worst[i].is_none() {
                worst[i] = Some(trial);
            }
        }
    }
    let names = [
        "partition-sum-equals-reciprocal",
        "divided-prefix-sum-equals-reciprocal",
        "multiplied-prefix-sum-equals-reciprocal",
        "continued-fraction-equals-reciprocal",
    ];
    for (i, name) in names.into_iter().enumerate() {
        checks.push(check(
            name,
            worst[i].is_none(),
            match worst[i] {
                None => format!("20 weights, order {order}, exact"),
                Some(t) => format!("mismatch on weight {t}"),
            },
        ));
    }
    Ok(SuiteReport {
        suite: "five-forms-formal",
        checks,
    })
}

/// Numeric evaluation routes at q = 3/10 for two reference weights.
fn five_forms_numeric_suite(opts: &VerifyOptions) -> Result<SuiteReport> {
    let ctx = opts.ctx()?;
    let ws = ctx.working_scale();
    let q = rat(3, 10);
    let tol_main = BigFloat::ulp_pow(40.min(ws), ws);
    let tol_cf = BigFloat::ulp_pow(30.min(ws), ws);
    let mut checks = Vec::new();
    let configs: [(&'static str, &'static str, WeightFunction); 2] = [
        (
            "constant-weight-pairwise",
            "constant-weight-continued-fraction",
            WeightFunction::Constant(rat(1, 2)),
        ),
        (
            "inverse-square-weight-pairwise",
            "inverse-square-weight-continued-fraction",
            WeightFunction::Power(-2),
        ),
    ];
    for (name_pairwise, name_cf, f) in configs {
        let report = eval_all_routes(&f, &q, &ctx, opts.cap)?;
        let mut gap = BigFloat::zero(ws);
        let sums: Vec<_> = report
            .entries()
            .into_iter()
            .filter(|(label, _)| *label != "continued-fraction")
            .collect();
        for (i, (_, a)) in sums.iter().enumerate() {
            for (_, b) in sums.iter().skip(i + 1) {
                let d = a.value.sub(&b.value).abs();
                if d.cmp_abs(&gap) == Ordering::Greater {
                    gap = d;
                }
            }
        }
        checks.push(check(
            name_pairwise,
            le(&gap, &tol_main),
            format!("max pairwise gap {}", gap.to_sci_string(3)),
        ));
        let cf_gap = report
            .continued_fraction
            .value
            .sub(&report.series.value)
            .abs();
        checks.push(check(
            name_cf,
            le(&cf_gap, &tol_cf),
            format!("gap to series value {}", cf_gap.to_sci_string(3)),
        ));
    }
    Ok(SuiteReport {
        suite: "five-forms-numeric",
        checks,
    })
}

/// The product itself against its three distinct-part expansions and the
/// dual continued fraction, same randomized weights as the primal suite.
fn dual_forms_suite(opts: &VerifyOptions) -> Result<SuiteReport> {
    let order = opts.order;
    let mut rng = Lcg(0x5eed_0001);
    let mut worst: [Option<usize>; 4] = [None; 4];
    for trial in 0..20 {
        let f = sample_weight(&mut rng);
        let base = phi_series(&QRing, &f, order)?;
        let routes: [QSeries; 4] = [
            expand_distinct15(&QRing, &f, order)?,
            expand_distinct16(&QRing, &f, order)?,
            expand_distinct17(&QRing, &f, order)?,
            cf_convergent_dual(&QRing, &f, order + 1, order)?,
        ];
        for (i, r) in routes.iter().enumerate() {
            if !series_equal(r, &base) && worst[i].is_none() {
                worst[i] = Some(trial);
            }
        }
    }
    let names = [
        "signed-distinct-sum-equals-product",
        "one-minus-prefix-sum-equals-product",
        "one-minus-divided-sum-equals-product",
        "dual-continued-fraction-equals-product",
    ];
    let checks = names
        .into_iter()
        .enumerate()
        .map(|(i, name)| {
            check(
                name,
                worst[i].is_none(),
                match worst[i] {
                    None => format!("20 weights, order {order}, exact"),
                    Some(t) => format!("mismatch on weight {t}"),
                },
            )
        })
        .collect();
    Ok(SuiteReport {
        suite: "dual-forms",
        checks,
    })
}

/// Products over multiples of m against their sin/sinh closed forms.
fn pi_products_suite(opts: &VerifyOptions) -> Result<SuiteReport> {
    let ctx = opts.ctx()?;
    let ws = ctx.working_scale();
    let tol = BigFloat::ulp_pow(4, ws);
    let mut checks = Vec::new();

    let half = pi_formula(2, 1, opts.cap, &ctx)?;
    let half_pi = BigFloat::pi(ws).div_u64(2);
    let gap = half.product.value.sub(&half_pi).abs();
    checks.push(check(
        "even-parts-product-near-half-pi",
        le(&gap, &tol) && half.agrees,
        format!("|product - pi/2| = {}", gap.to_sci_string(3)),
    ));

    let mut all_agree = true;
    let mut detail = String::new();
    for m in 2..=6 {
        let r = pi_formula(m, 1, opts.cap, &ctx)?;
        if !r.agrees {
            all_agree = false;
        }
        if m > 2 {
            detail.push_str(", ");
        }
        detail.push_str(&format!("m={m}: {}", r.gap.to_sci_string(2)));
    }
    checks.push(check(
        "sine-closed-forms-within-tail-bounds",
        all_agree,
        detail,
    ));

    let fourth = pi_formula(2, 2, opts.cap, &ctx)?;
    checks.push(check(
        "even-parts-fourth-power-closed-form",
        le(&fourth.gap, &tol) && fourth.agrees,
        format!("gap {}", fourth.gap.to_sci_string(3)),
    ));
    Ok(SuiteReport {
        suite: "pi-products",
        checks,
    })
}

/// Length-k sums at exponent 2: the even-zeta closed-form table, the
/// deep entry, and brute force at k = 2.
fn repeated_exponent_2_suite(opts: &VerifyOptions) -> Result<SuiteReport> {
    let ctx = opts.ctx()?;
    let table = [
        (1u32, rat(1, 6)),
        (2, rat(7, 360)),
        (3, rat(31, 15120)),
        (4, rat(127, 604800)),
        (5, rat(511, 23950080)),
    ];
    let mut ok = true;
    for (k, coeff) in &table {
        let cf = repeated_zeta_closed(1, *k)?;
        if cf.coeff != *coeff || cf.pi_power != 2 * k {
            ok = false;
        }
    }
    let mut checks = vec![check(
        "table-entries-exact",
        ok,
        "k = 1..5 rational coefficients".into(),
    )];

    let k13 = repeated_zeta_closed(1, 13)?;
    let denom = BigInt::parse_bytes(b"93067260259985915904000000", 10).expect("literal");
    let want = BigRational::new(BigInt::from(22076500342261i64), denom);
    checks.push(check(
        "deep-entry-exact",
        k13.coeff == want && k13.pi_power == 26,
        format!("k = 13 coefficient {}", k13.coeff),
    ));

    let closed = repeated_zeta_closed(1, 2)?.value(&ctx);
    let brute = zeta_fixed_length(
        &PartSpec::All,
        &big(2),
        2,
        false,
        opts.part_cap,
        &ctx,
    )?;
    let gap = brute.value.sub(&closed).abs();
    let tol = BigFloat::ulp_pow(3, ctx.working_scale());
    checks.push(check(
        "brute-force-pair-sum",
        le(&gap, &tol),
        format!("gap {}", gap.to_sci_string(3)),
    ));
    Ok(SuiteReport {
        suite: "repeated-exponent-2",
        checks,
    })
}

/// Length-k sums at exponent 4: the alternating even-zeta convolution
/// against the recursive value, exactly.
fn repeated_exponent_4_suite(_opts: &VerifyOptions) -> Result<SuiteReport> {
    let mut ok = true;
    for k in 0..=4 {
        if repeated_zeta_4_products(k) != repeated_zeta_closed(2, k)? {
            ok = false;
        }
    }
    let k1 = repeated_zeta_closed(2, 1)?;
    Ok(SuiteReport {
        suite: "repeated-exponent-4",
        checks: vec![
            check(
                "convolution-display-equals-recursion",
                ok,
                "k = 0..4 exact".into(),
            ),
            check(
                "single-length-is-zeta-4",
                k1.coeff == rat(1, 90) && k1.pi_power == 4,
                format!("{k1}"),
            ),
        ],
    })
}

/// Distinct-part length-k sums: factorial closed forms, brute force, and
/// the two displayed convolution families.
fn mzv_suite(opts: &VerifyOptions) -> Result<SuiteReport> {
    let ctx = opts.ctx()?;
    let mut ok = true;
    let mut fact = BigInt::one();
    for k in 0u32..=6 {
        if k > 0 {
            fact *= BigInt::from(2 * k) * BigInt::from(2 * k + 1);
        }
        let cf = repeated_mzv_closed(1, k)?;
        if cf.coeff != BigRational::new(BigInt::one(), fact.clone()) || cf.pi_power != 2 * k {
            ok = false;
        }
    }
    let mut checks = vec![check(
        "inverse-factorial-values-exact",
        ok,
        "k = 0..6".into(),
    )];

    let closed = repeated_mzv_closed(1, 2)?.value(&ctx);
    let brute = zeta_fixed_length(&PartSpec::All, &big(2), 2, true, opts.part_cap, &ctx)?;
    let gap = brute.value.sub(&closed).abs();
    checks.push(check(
        "brute-force-distinct-pair",
        le(&gap, &BigFloat::ulp_pow(3, ctx.working_scale())),
        format!("gap {}", gap.to_sci_string(3)),
    ));

    let mut disp4 = true;
    for k in 0..=4 {
        if repeated_mzv_4_factorials(k) != repeated_mzv_closed(2, k)? {
            disp4 = false;
        }
    }
    checks.push(check(
        "fourth-power-display-equals-recursion",
        disp4,
        "k = 0..4 exact".into(),
    ));
    let mut disp8 = true;
    for k in 0..=2 {
        if repeated_mzv_8_factorials(k) != repeated_mzv_closed(3, k)? {
            disp8 = false;
        }
    }
    checks.push(check(
        "eighth-power-display-equals-recursion",
        disp8,
        "k = 0..2 exact".into(),
    ));
    Ok(SuiteReport {
        suite: "mzv",
        checks,
    })
}

/// The pair identity (zeta(2s) + zeta(s)^2)/2 against brute force and
/// against the exponent-2 closed form.
fn pair_shuffle_suite(opts: &VerifyOptions) -> Result<SuiteReport> {
    let ctx = opts.ctx()?;
    let pair = repeated_zeta_pair(&big(3), &ctx)?;
    let brute = zeta_fixed_length(&PartSpec::All, &big(3), 2, false, opts.part_cap, &ctx)?;
    let gap = pair.value.sub(&brute.value).abs();
    let exact_match = repeated_zeta_pair_closed(2)? == repeated_zeta_closed(1, 2)?;
    Ok(SuiteReport {
        suite: "pair-shuffle",
        checks: vec![
            check(
                "cubed-exponent-brute-force",
                le(&gap, &BigFloat::ulp_pow(3, ctx.working_scale())),
                format!("gap {}", gap.to_sci_string(3)),
            ),
            check(
                "squared-exponent-exact",
                exact_match,
                "pair form equals length-2 recursion value".into(),
            ),
        ],
    })
}

/// Doubling identities: exact on finite sets, within tail bounds over the
/// primes, and the Dirichlet coefficients against arithmetic sieves.
fn doubling_suite(opts: &VerifyOptions) -> Result<SuiteReport> {
    let ctx = opts.ctx()?;
    let sets: [&[u64]; 4] = [
        &[2, 3],
        &[2, 3, 5, 7, 11, 13],
        &[4, 9, 25, 49],
        &[2, 10, 25, 50],
    ];
    let mut exact_ok = true;
    for members in sets {
        let parts = PartSpec::finite(members.iter().copied())?;
        for s in [2i64, 3] {
            for distinct in [false, true] {
                let (l, r) = doubling_exact(&parts, s, distinct)?;
                if l != r {
                    exact_ok = false;
                }
            }
        }
    }
    let mut checks = vec![check(
        "finite-sets-exact",
        exact_ok,
        "4 sets in {2..50}, s in {2,3}, both classes".into(),
    )];

    let series_cap = opts.cap.min(10_000);
    let plain = doubling_series_check(&PartSpec::Primes, &big(2), false, opts.cap, series_cap, &ctx)?;
    checks.push(check(
        "liouville-series-within-bounds",
        plain.agrees && plain.series_rigorous,
        format!(
            "gap {} allowance {}",
            plain.gap.to_sci_string(3),
            plain.allowance.to_sci_string(3)
        ),
    ));
    let dist = doubling_series_check(&PartSpec::Primes, &big(2), true, opts.cap, series_cap, &ctx)?;
    checks.push(check(
        "moebius-series-within-bounds",
        dist.agrees && dist.series_rigorous,
        format!(
            "gap {} allowance {}",
            dist.gap.to_sci_string(3),
            dist.allowance.to_sci_string(3)
        ),
    ));

    // smallest-prime-factor sieve oracle
    let m = 1000usize;
    let mut spf = vec![0usize; m + 1];
    for i in 2..=m {
        if spf[i] == 0 {
            for j in (i..=m).step_by(i) {
                if spf[j] == 0 {
                    spf[j] = i;
                }
            }
        }
    }
    let mut liou = vec![0i64; m + 1];
    let mut moeb = vec![0i64; m + 1];
    liou[1] = 1;
    moeb[1] = 1;
    for n in 2..=m {
        let p = spf[n];
        let q = n / p;
        liou[n] = -liou[q];
        moeb[n] = if q % p == 0 { 0 } else { -moeb[q] };
    }
    let lam = dirichlet_extract(&PartSpec::Primes, false, true, m as u64)?;
    let mu = dirichlet_extract(&PartSpec::Primes, true, true, m as u64)?;
    let mu_abs = dirichlet_extract(&PartSpec::Primes, true, false, m as u64)?;
    let coeffs_ok = (1..=m)
        .all(|n| lam[n] == liou[n] && mu[n] == moeb[n] && mu_abs[n] == moeb[n].abs());
    checks.push(check(
        "coefficients-match-sieves",
        coeffs_ok,
        format!("n <= {m}: signed counts vs direct sieves"),
    ));
    Ok(SuiteReport {
        suite: "doubling",
        checks,
    })
}

/// The three cubic cosh product values. The companion product converges
/// like sum n^(-3), so its cap is raised until the truncation tail sits
/// inside the pinned tolerance.
fn cubic_product_suite(opts: &VerifyOptions) -> Result<SuiteReport> {
    let ctx = opts.ctx()?;
    let ws = ctx.working_scale();
    let tol = BigFloat::ulp_pow(8, ws);
    let checks_at_cap = cubic_cosh_checks(opts.cap, &ctx)?;
    let companion = &cubic_cosh_checks(opts.cap.max(12_000), &ctx)?[1];
    let main = &checks_at_cap[0];
    let sixth = &checks_at_cap[2];
    Ok(SuiteReport {
        suite: "cubic-product",
        checks: vec![
            check(
                "main-product-within-1e-8",
                main.agrees && le(&main.gap, &tol),
                format!("gap {}", main.gap.to_sci_string(3)),
            ),
            check(
                "companion-product-within-1e-8",
                companion.agrees && le(&companion.gap, &tol),
                format!("gap {}", companion.gap.to_sci_string(3)),
            ),
            check(
                "sixth-power-combination-within-1e-8",
                sixth.agrees && le(&sixth.gap, &tol),
                format!("gap {}", sixth.gap.to_sci_string(3)),
            ),
        ],
    })
}

/// prod (1 + n^(-2)) against sinh(pi)/pi.
fn sinh_product_suite(opts: &VerifyOptions) -> Result<SuiteReport> {
    let ctx = opts.ctx()?;
    let ws = ctx.working_scale();
    let q = ZetaQuery::new(PartSpec::All, big(2)).over_distinct();
    let a = zeta_class(&q, opts.cap, &ctx)?;
    let pi = BigFloat::pi(ws);
    let want = pi.sinh().div(&pi)?;
    let gap = a.value.sub(&want).abs();
    Ok(SuiteReport {
        suite: "sinh-product",
        checks: vec![check(
            "product-matches-sinh-over-pi",
            le(&gap, &BigFloat::ulp_pow(3, ws)),
            format!("gap {}", gap.to_sci_string(3)),
        )],
    })
}

/// Nested combinatorial coefficients against direct series expansion.
fn eta_quotients_suite(_opts: &VerifyOptions) -> Result<SuiteReport> {
    let mut rng = Lcg(0x9e3779b97f4a7c15);
    let mut bad = None;
    for trial in 0..50 {
        let n_layers = 1 + (rng.next() % 3) as usize;
        let mut layers = Vec::with_capacity(n_layers);
        for _ in 0..n_layers {
            let mask = (rng.next() % 1023) as u16;
            let members: Vec<u64> = (1..=10u64).filter(|k| mask >> (k - 1) & 1 == 1).collect();
            let parts = if members.is_empty() {
                PartSpec::finite([1u64])?
            } else {
                PartSpec::finite(members)?
            };
            let weight = match rng.next() % 3 {
                0 => WeightFunction::constant_int((rng.next() % 5) as i64 - 2),
                1 => WeightFunction::Power((rng.next() % 4) as i64 - 1),
                _ => WeightFunction::Table(
                    (1..=10)
                        .map(|k| (k, big((rng.next() % 7) as i64 - 3)))
                        .collect(),
                ),
            };
            let inner = if rng.next() % 2 == 0 { 1 } else { -1 };
            let outer = if rng.next() % 2 == 0 { 1 } else { -1 };
            layers.push(ProductLayer::new(parts, weight, inner, outer)?);
        }
        let spec = QuotientSpec::new(layers, 15)?;
        if coeffs_nested(&spec)?.coeffs() != coeffs_direct(&spec)?.coeffs() {
            bad = Some(trial);
            break;
        }
    }
    let mut checks = vec![check(
        "nested-equals-direct-randomized",
        bad.is_none(),
        match bad {
            None => "50 specs, up to 3 layers, order 15".into(),
            Some(t) => format!("mismatch on spec {t}"),
        },
    )];

    let spec = QuotientSpec::new(
        vec![ProductLayer::denominator(PartSpec::All, WeightFunction::one())?],
        10,
    )?;
    let nested = coeffs_nested(&spec)?;
    let table = partition_counts_pentagonal(10);
    let p_ok = (0..=10usize).all(|k| {
        nested.coeff(k) == &BigRational::from(BigInt::from(table[k].clone()))
    });
    checks.push(check(
        "reciprocal-pochhammer-counts-partitions",
        p_ok,
        "orders 0..=10".into(),
    ));
    Ok(SuiteReport {
        suite: "eta-quotients",
        checks,
    })
}

/// Arithmetic-progression congruences between power weights and their
/// residue-constant replacements.
fn congruences_suite(opts: &VerifyOptions) -> Result<SuiteReport> {
    let order = opts.order;
    let cases = [(1u64, 3u64, 1u32), (2, 4, 1), (1, 5, 2)];
    let mut checks = Vec::new();
    let names = ["residue-1-mod-3", "residue-2-mod-4", "residue-1-mod-5"];
    for ((a, m, s), name) in cases.into_iter().zip(names) {
        let r = congruence_check(a, m, s, order)?;
        checks.push(check(
            name,
            r.agrees,
            match r.first_mismatch {
                None => format!("order {order}, modulus {m}"),
                Some(i) => format!("first mismatch at q^{i}"),
            },
        ));
    }
    Ok(SuiteReport {
        suite: "congruences",
        checks,
    })
}

/// The golden-ratio-shaped relation between the two single sums, and the
/// length-marker slice law, on randomized weights.
fn golden_z_suite(opts: &VerifyOptions) -> Result<SuiteReport> {
    let order = opts.order;
    let mut rng = Lcg(0x90_1de0);
    let mut golden_bad = None;
    let mut slice_bad = None;
    for trial in 0..10 {
        let f = sample_weight(&mut rng);
        let s5 = sum_terms5(&QRing, &f, order)?;
        let s6 = sum_terms6(&QRing, &f, order)?;
        if !series_equal(&s5.sub(&s6)?, &s5.mul(&s6)?) && golden_bad.is_none() {
            golden_bad = Some(trial);
        }
        // z-slice: degree-1 coefficient of 1/phi(z f) is sum f(n) q^n
        let ring = ZPolyRing::new(3);
        let zf = WeightFunction::ZScaled(Box::new(f.clone()));
        let inv = phi_series(&ring, &zf, order)?.reciprocal()?;
        let d1 = z_marker_extract(&inv, 1);
        let mut good = d1.coeff(0).is_zero();
        for n in 1..=order {
            let expect = f
                .eval(n as u64)
                .expect_rational("plain weight")?;
            if d1.coeff(n) != &expect {
                good = false;
                break;
            }
        }
        if !good && slice_bad.is_none() {
            slice_bad = Some(trial);
        }
    }
    Ok(SuiteReport {
        suite: "golden-z",
        checks: vec![
            check(
                "single-sum-difference-equals-product",
                golden_bad.is_none(),
                match golden_bad {
                    None => format!("10 weights, order {order}, exact"),
                    Some(t) => format!("mismatch on weight {t}"),
                },
            ),
            check(
                "length-marker-slice-recovers-weights",
                slice_bad.is_none(),
                match slice_bad {
                    None => format!("10 weights, order {order}, exact"),
                    Some(t) => format!("mismatch on weight {t}"),
                },
            ),
        ],
    })
}

/// Depth-8 doubling chains against their targets, both flavors.
fn telescoping_suite(opts: &VerifyOptions) -> Result<SuiteReport> {
    let ctx = opts.ctx()?;
    let ws = ctx.working_scale();
    let tol = BigFloat::ulp_pow(9, ws);
    let cap = opts.cap.min(2000);
    let plain = telescoping_check(&PartSpec::greater_eq(2)?, &big(2), false, 8, cap, &ctx)?;
    let alt = telescoping_check(&PartSpec::All, &big(2), true, 8, cap, &ctx)?;
    Ok(SuiteReport {
        suite: "telescoping",
        checks: vec![
            check(
                "plain-chain-depth-8",
                plain.agrees && le(&plain.gap, &tol),
                format!("gap {}", plain.gap.to_sci_string(3)),
            ),
            check(
                "alternating-chain-depth-8",
                alt.agrees && le(&alt.gap, &tol) && alt.dropped_one,
                format!("gap {}", alt.gap.to_sci_string(3)),
            ),
        ],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_dispatch() {
        let opts = VerifyOptions {
            order: 12,
            digits: 30,
            cap: 400,
            part_cap: 400,
        };
        assert!(matches!(
            run_suite("no-such-suite", &opts),
            Err(Error::Invalid(_))
        ));
        assert!(matches!(
            run_matching(Some("zzz"), &opts),
            Err(Error::Invalid(_))
        ));
    }

    #[test]
    fn partition_counts_suite_passes() {
        let r = run_suite("partition-counts", &VerifyOptions::default()).unwrap();
        assert!(r.passed());
    }

    #[test]
    fn reports_are_deterministic() {
        let opts = VerifyOptions::default();
        let a = run_suite("congruences", &opts).unwrap().to_json();
        let b = run_suite("congruences", &opts).unwrap().to_json();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }

    #[test]
    fn matching_filters_by_substring() {
        let opts = VerifyOptions::default();
        let got = run_matching(Some("five-forms"), &opts).unwrap();
        assert_eq!(got.len(), 2);
        assert!(got.iter().all(|r| r.suite.contains("five-forms")));
    }
}
