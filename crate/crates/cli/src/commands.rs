use hyperzero::classifier::{classify as classify_params, critical_points, disc_g, omega_region_of, singular_points, OmegaRegion};
use hyperzero::netcurve::{default_half_width, extract_curve, has_enclosing_closed_curve, CurveSet, Enclosure};
use hyperzero::recurrence::PnEvaluator;
use hyperzero::roots::{find_roots_with, RootOptions};
use hyperzero::verify::{summarize, sweep_with, verify_params_with, Region, VerificationReport, VerifyOptions};
use hyperzero::{limiting_set, parse_scalar, Error, Rect, SymbolParams};
use serde_json::{json, Value};

use crate::output::{csv_bytes, document, json_bytes, Format, OutputSpec};
use crate::svg::Plot;
use crate::{CliError, ParamArgs};

const FLOAT_WARNING: &str = "decimal input: evaluated in floating point; use p/q for exact signs";

fn parse_params(p: &ParamArgs) -> Result<SymbolParams, CliError> {
    Ok(SymbolParams::parse(&p.alpha, &p.beta, &p.gamma)?)
}

fn params_fields(p: &SymbolParams) -> Vec<(&'static str, Value)> {
    let mut v = vec![("params", json!(p))];
    if !p.is_exact() {
        v.push(("warning", Value::from(FLOAT_WARNING)));
    }
    v
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn merge(mut base: Vec<(&'static str, Value)>, obj: Value) -> Value {
    let mut doc = document(Vec::new());
    let map = doc.as_object_mut().expect("document is an object");
    for (k, v) in base.drain(..) {
        map.insert(k.to_string(), v);
    }
    if let Value::Object(extra) = obj {
        for (k, v) in extra {
            map.insert(k, v);
        }
    }
    doc
}

pub fn classify(p: &ParamArgs, out: &OutputSpec) -> Result<u8, CliError> {
    out.require(&[Format::Json])?;
    let params = parse_params(p)?;
    let c = classify_params(&params)?;
    let singular = singular_points(&params)?;
    let mut fields = params_fields(&params);
    fields.push(("singular_points", to_value(&singular.points)));
    out.write(&json_bytes(&merge(fields, to_value(&c))))?;
    Ok(if c.verdict { 0 } else { 1 })
}

pub fn roots(p: &ParamArgs, n: usize, out: &OutputSpec) -> Result<u8, CliError> {
    out.require(&[Format::Json, Format::Csv])?;
    if n == 0 {
        return Err(CliError::Usage("n must be at least 1".into()));
    }
    let params = parse_params(p)?;
    let rs = find_roots_with(&PnEvaluator::new(&params, n), &RootOptions::default())?;
    let mut order: Vec<usize> = (0..rs.roots.len()).collect();
    order.sort_by(|&i, &j| {
        let (a, b) = (rs.roots[i], rs.roots[j]);
        a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
    });
    match out.format {
        Format::Csv => {
            let rows = order.iter().map(|&k| {
                let z = rs.roots[k];
                vec![out.num(z.re), out.num(z.im), out.num(rs.residuals[k])]
            });
            out.write(&csv_bytes(&["re", "im", "residual"], rows)?)?;
        }
        _ => {
            let roots: Vec<Value> = order
                .iter()
                .map(|&k| json!({"re": rs.roots[k].re, "im": rs.roots[k].im, "residual": rs.residuals[k]}))
                .collect();
            let mut fields = params_fields(&params);
            fields.extend([
                ("n", json!(n)),
                ("max_imag", json!(rs.max_imag)),
                ("max_modulus", json!(rs.max_modulus())),
                ("sweeps", json!(rs.sweeps)),
                ("roots", Value::Array(roots)),
            ]);
            out.write(&json_bytes(&merge(fields, Value::Null)))?;
        }
    }
    Ok(0)
}

fn enclosure_value(e: &Result<Enclosure, Error>) -> Value {
    match e {
        Ok(e) => json!({"enclosing": e.enclosing, "component": e.component, "simple": e.simple, "inconclusive": false}),
        Err(_) => json!({"enclosing": Value::Null, "component": Value::Null, "simple": Value::Null, "inconclusive": true}),
    }
}

pub fn curve(p: &ParamArgs, bbox: Option<&str>, res: usize, overlay: Option<usize>, out: &OutputSpec) -> Result<u8, CliError> {
    let params = parse_params(p)?;
    let rect = match bbox {
        Some(b) => Rect::parse(b)?,
        None => Rect::centered(default_half_width(&params))?,
    };
    if res < 16 {
        return Err(CliError::Usage(format!("resolution {res} is below the minimum of 16")));
    }
    let curves = extract_curve(&params, &rect, res)?;
    let enclosure = has_enclosing_closed_curve(&curves);
    let mut summary = params_fields(&params);
    summary.extend([
        ("rect", to_value(&rect)),
        ("resolution", json!(res)),
        ("components", json!(curves.components.len())),
        ("enclosure", enclosure_value(&enclosure)),
    ]);
    let summary = merge(summary, Value::Null);

    match out.format {
        Format::Svg => {
            let svg = curve_svg(&params, &curves, &enclosure, overlay)?;
            out.write(svg.as_bytes())?;
            if let Some(side) = out.sidecar(".json") {
                crate::output::write_atomic(&side, &json_bytes(&summary))?;
            }
        }
        Format::Csv => {
            let rows = curves.components.iter().enumerate().flat_map(|(k, c)| {
                c.points
                    .iter()
                    .map(move |q| vec![k.to_string(), c.closed.to_string(), out.num(q[0]), out.num(q[1])])
            });
            out.write(&csv_bytes(&["component", "closed", "x", "y"], rows)?)?;
            if let Some(side) = out.sidecar(".json") {
                crate::output::write_atomic(&side, &json_bytes(&summary))?;
            }
        }
        Format::Json => {
            let mut doc = summary;
            doc["curve"] = to_value(&curves);
            out.write(&json_bytes(&doc))?;
        }
    }
    match enclosure {
        Err(Error::Inconclusive) => Err(CliError::Numerical(
            "enclosure inconclusive: a candidate component touches the box boundary; enlarge --box".into(),
        )),
        Err(e) => Err(e.into()),
        Ok(_) => Ok(0),
    }
}

fn curve_svg(
    params: &SymbolParams,
    curves: &CurveSet,
    enclosure: &Result<Enclosure, Error>,
    overlay: Option<usize>,
) -> Result<String, CliError> {
    let mut plot = Plot::new(curves.rect, 640.0);
    plot.axes();
    let chosen = enclosure.as_ref().ok().and_then(|e| e.component);
    for (k, c) in curves.components.iter().enumerate() {
        if Some(k) == chosen {
            plot.polyline(&c.points, "#c0392b", 2.0);
        } else {
            plot.polyline(&c.points, "#2c7fb8", 1.2);
        }
    }
    if let Ok(cp) = critical_points(params) {
        for z in &cp.roots {
            plot.dot(z.re, z.im, 3.5, "#27ae60");
        }
    }
    for s in &singular_points(params)?.points {
        plot.dot(s.x, s.y, 4.5, "#e67e22");
    }
    if let Some(n) = overlay.filter(|&n| n > 0) {
        let rs = find_roots_with(&PnEvaluator::new(params, n), &RootOptions::default())?;
        for z in &rs.roots {
            plot.dot(z.re, z.im, 1.6, "#8e44ad");
        }
    }
    plot.dot(0.0, 0.0, 3.0, "black");
    let [a, b, g] = params.display();
    let verdict = match enclosure {
        Ok(e) if e.enclosing => format!(
            "enclosing {} curve",
            if e.simple == Some(false) { "non-simple" } else { "simple" }
        ),
        Ok(_) => "no enclosing curve".to_string(),
        Err(_) => "enclosure inconclusive".to_string(),
    };
    plot.label(8.0, 16.0, &format!("α={a} β={b} γ={g}: {verdict}"));
    Ok(plot.finish("Im b = 0 off the real axis"))
}

fn spectral_box(params: &SymbolParams) -> Result<Rect, CliError> {
    // Row sums of T_n bound every eigenvalue.
    let r = 1.0 + params.alpha.abs() + params.beta.abs() + params.gamma.abs();
    Ok(Rect::centered(1.1 * r)?)
}

pub fn limset(p: &ParamArgs, bbox: Option<&str>, res: usize, eps: f64, out: &OutputSpec) -> Result<u8, CliError> {
    let params = parse_params(p)?;
    let rect = match bbox {
        Some(b) => Rect::parse(b)?,
        None => spectral_box(&params)?,
    };
    let ls = limiting_set(&params, &rect, res, eps)?;
    match out.format {
        Format::Csv => {
            let rows = ls
                .points
                .iter()
                .map(|q| vec![out.num(q.lambda.re), out.num(q.lambda.im), out.num(q.gap)]);
            out.write(&csv_bytes(&["re", "im", "gap"], rows)?)?;
        }
        Format::Json => {
            let mut fields = params_fields(&params);
            fields.extend([
                ("rect", to_value(&rect)),
                ("resolution", json!(res)),
                ("eps", json!(eps)),
                ("count", json!(ls.points.len())),
                ("max_abs_imag", json!(ls.max_abs_imag())),
                ("step_x", json!(ls.step_x)),
                ("step_y", json!(ls.step_y)),
                ("scanned", json!(ls.scanned)),
                ("skipped", json!(ls.skipped)),
            ]);
            out.write(&json_bytes(&merge(fields, Value::Null)))?;
        }
        Format::Svg => {
            let mut plot = Plot::new(rect, 640.0);
            plot.axes();
            for q in &ls.points {
                plot.dot(q.lambda.re, q.lambda.im, 1.2, "#2c7fb8");
            }
            let [a, b, g] = params.display();
            plot.label(8.0, 16.0, &format!("α={a} β={b} γ={g}: {} points, eps={eps}", ls.points.len()));
            out.write(plot.finish("Limiting set sample").as_bytes())?;
        }
    }
    if ls.skipped > 0 {
        eprintln!("hyperzero: {} grid points skipped", ls.skipped);
    }
    Ok(0)
}

fn region_name(r: Option<OmegaRegion>) -> &'static str {
    match r {
        Some(OmegaRegion::Omega1) => "Omega1",
        Some(OmegaRegion::Omega2) => "Omega2",
        Some(OmegaRegion::Omega3) => "Omega3",
        Some(OmegaRegion::Omega4) => "Omega4",
        None => "none",
    }
}

fn region_colour(r: Option<OmegaRegion>) -> &'static str {
    match r {
        Some(OmegaRegion::Omega1) => "#9ecae1",
        Some(OmegaRegion::Omega2) => "#fdae6b",
        Some(OmegaRegion::Omega3) => "#a1d99b",
        Some(OmegaRegion::Omega4) => "#dadaeb",
        None => "#f0f0f0",
    }
}

pub fn region_map(beta: &str, bbox: &str, res: usize, out: &OutputSpec) -> Result<u8, CliError> {
    let beta = parse_scalar(beta)?.to_f64();
    if beta == 0.0 || !beta.is_finite() {
        return Err(CliError::Usage("beta must be a nonzero number".into()));
    }
    let rect = Rect::parse(bbox)?;
    if res < 2 {
        return Err(CliError::Usage("resolution must be at least 2".into()));
    }
    let (dg, dv) = (rect.width() / res as f64, rect.height() / res as f64);
    // Cell centres, rows bottom to top.
    let cells: Vec<Vec<(f64, f64, Option<OmegaRegion>)>> = (0..res)
        .map(|j| {
            let v = rect.y0 + (j as f64 + 0.5) * dv;
            (0..res)
                .map(|i| {
                    let g = rect.x0 + (i as f64 + 0.5) * dg;
                    (g, v, omega_region_of(beta, g, v))
                })
                .collect()
        })
        .collect();
    let mut counts = serde_json::Map::new();
    for name in ["Omega1", "Omega2", "Omega3", "Omega4", "none"] {
        counts.insert(name.into(), json!(0));
    }
    for row in &cells {
        for c in row {
            let e = counts.get_mut(region_name(c.2)).expect("all names present");
            *e = json!(e.as_u64().unwrap_or(0) + 1);
        }
    }
    match out.format {
        Format::Svg => out.write(region_svg(beta, &rect, &cells, dg, dv).as_bytes())?,
        Format::Csv => {
            let rows = cells
                .iter()
                .flatten()
                .map(|c| vec![out.num(c.0), out.num(c.1), region_name(c.2).to_string()]);
            out.write(&csv_bytes(&["gamma", "v", "region"], rows)?)?;
        }
        Format::Json => {
            let doc = document(vec![
                ("beta", json!(beta)),
                ("rect", to_value(&rect)),
                ("resolution", json!(res)),
                ("counts", Value::Object(counts)),
            ]);
            out.write(&json_bytes(&doc))?;
        }
    }
    Ok(0)
}

/// `Δ(G)` on the slice, as a function of `(γ, v)`.
fn slice_disc(beta: f64, g: f64, v: f64) -> Option<f64> {
    let p = SymbolParams::new((v + beta * beta / 4.0) / g, beta, g).ok()?;
    Some(disc_g(&p).value)
}

fn region_svg(beta: f64, rect: &Rect, cells: &[Vec<(f64, f64, Option<OmegaRegion>)>], dg: f64, dv: f64) -> String {
    let mut plot = Plot::new(*rect, 640.0);
    // Runs of equal colour per row keep the file small.
    for row in cells {
        let mut start = 0;
        for i in 1..=row.len() {
            if i == row.len() || row[i].2 != row[start].2 {
                let (g0, v) = (row[start].0 - dg / 2.0, row[start].1);
                let g1 = row[i - 1].0 + dg / 2.0;
                plot.cell(g0, g1, v - dv / 2.0, v + dv / 2.0, region_colour(row[start].2));
                start = i;
            }
        }
    }
    // disc_h = 0: v = ±2(-γ)^{3/2}
    let samples = 400;
    let g_hi = rect.x1.min(0.0);
    if rect.x0 < g_hi {
        for sign in [1.0, -1.0] {
            let pts: Vec<[f64; 2]> = (0..=samples)
                .map(|k| {
                    let g = rect.x0 + (g_hi - rect.x0) * k as f64 / samples as f64;
                    [g, sign * 2.0 * (-g).powf(1.5)]
                })
                .collect();
            plot.polyline(&pts, "#08519c", 1.5);
        }
    }
    // 24v + β² = 0
    let l = -beta * beta / 24.0;
    if l > rect.y0 && l < rect.y1 {
        plot.line([rect.x0, l], [g_hi.max(rect.x0), l], "#555555", 1.0, true);
    }
    // Δ(G) = 0, located by bisection along each column.
    let cols = 4 * cells.len().max(1);
    let rows = 4 * cells.len().max(1);
    for i in 0..cols {
        let g = rect.x0 + (i as f64 + 0.5) * rect.width() / cols as f64;
        if g >= 0.0 {
            continue;
        }
        let at = |j: usize| rect.y0 + j as f64 * rect.height() / rows as f64;
        for j in 0..rows {
            let (mut lo, mut hi) = (at(j), at(j + 1));
            let (Some(flo), Some(fhi)) = (slice_disc(beta, g, lo), slice_disc(beta, g, hi)) else {
                continue;
            };
            if (flo > 0.0) == (fhi > 0.0) {
                continue;
            }
            for _ in 0..40 {
                let mid = 0.5 * (lo + hi);
                match slice_disc(beta, g, mid) {
                    Some(f) if (f > 0.0) == (flo > 0.0) => lo = mid,
                    _ => hi = mid,
                }
            }
            plot.dot(g, 0.5 * (lo + hi), 1.0, "#a50f15");
        }
    }
    plot.label(8.0, 16.0, &format!("β={beta}: Ω1 blue, Ω2 orange, Ω3 green, Ω4 lilac"));
    plot.finish("Regions of the (γ, v) half-plane")
}

pub enum VerifyTarget {
    Params { alpha: String, beta: String, gamma: String },
    Region { spec: String, samples: usize, seed: u64 },
}

fn parse_region(spec: &str) -> Result<Region, CliError> {
    let v: Vec<f64> = spec
        .split(',')
        .map(|s| parse_scalar(s.trim()).map(|x| x.to_f64()))
        .collect::<Result<_, _>>()?;
    if v.len() != 6 {
        return Err(CliError::Usage("region must be \"a0,a1,b0,b1,g0,g1\"".into()));
    }
    let ordered = |a: f64, b: f64| if a <= b { Ok((a, b)) } else { Err(CliError::Usage("region bounds must be ordered".into())) };
    Ok(Region::Params {
        alpha: ordered(v[0], v[1])?,
        beta: ordered(v[2], v[3])?,
        gamma: ordered(v[4], v[5])?,
    })
}

pub fn verify(target: VerifyTarget, n_max: usize, tol: f64, res: usize, out: &OutputSpec) -> Result<u8, CliError> {
    out.require(&[Format::Json])?;
    let opts = VerifyOptions {
        curve_resolution: res,
        ..VerifyOptions::default()
    };
    let reports: Vec<VerificationReport> = match target {
        VerifyTarget::Params { alpha, beta, gamma } => gamma
            .split(',')
            .map(|g| {
                let params = SymbolParams::parse(&alpha, &beta, g.trim())?;
                verify_params_with(&params, n_max, tol, &opts)
            })
            .collect::<Result<_, _>>()?,
        VerifyTarget::Region { spec, samples, seed } => {
            sweep_with(&parse_region(&spec)?, samples, n_max, seed, tol, &opts)?
        }
    };
    let summary = summarize(&reports);
    let doc = document(vec![("reports", to_value(&reports)), ("summary", to_value(&summary))]);
    out.write(&json_bytes(&doc))?;
    if !summary.errors.is_empty() {
        return Ok(3);
    }
    Ok(if reports.iter().all(|r| r.overall) { 0 } else { 1 })
}
