use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyperzero"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout))
    })
}

fn params<'a>(a: &'a str, b: &'a str, g: &'a str) -> Vec<String> {
    vec![format!("--alpha={a}"), format!("--beta={b}"), format!("--gamma={g}")]
}

fn with(cmd: &str, p: &[String], extra: &[&str]) -> Output {
    let mut args: Vec<&str> = vec![cmd];
    args.extend(p.iter().map(String::as_str));
    args.extend_from_slice(extra);
    run(&args)
}

#[test]
fn classify_exit_codes() {
    let out = run(&["classify", "-a", "-27/4", "-b", "-7/8", "-g", "5/2"]);
    assert_eq!(code(&out), 0);
    let doc = json(&out);
    assert_eq!(doc["schema"], "hyperzero/1");
    assert_eq!(doc["verdict"], true);
    for key in ["case", "disc_g", "disc_w", "disc_h", "critical_pattern", "omega_region", "diagnostics"] {
        assert!(doc.get(key).is_some(), "missing {key}");
    }
    assert!(doc.get("warning").is_none());

    let out = run(&["classify", "-a", "3/4", "-b", "1", "-g", "-1/5"]);
    assert_eq!(code(&out), 1);
    let doc = json(&out);
    assert_eq!(doc["verdict"], false);
    assert_eq!(doc["omega_region"], "Omega3");

    assert_eq!(code(&run(&["classify", "-a", "1", "-b", "1", "-g", "0"])), 2);
    assert_eq!(code(&run(&["classify", "-a", "x", "-b", "1", "-g", "1"])), 2);
    assert_eq!(code(&run(&["classify", "-a", "1", "-b", "1"])), 2);
}

#[test]
fn decimal_input_carries_warning() {
    let out = run(&["classify", "-a", "0.75", "-b", "1", "-g", "-0.2"]);
    assert_eq!(code(&out), 1);
    assert!(json(&out)["warning"].is_string());
}

#[test]
fn roots_of_p2() {
    let out = with("roots", &params("-4", "0", "1"), &["-n", "2"]);
    assert_eq!(code(&out), 0);
    let mut rdr = csv::Reader::from_reader(out.stdout.as_slice());
    assert_eq!(rdr.headers().unwrap(), vec!["re", "im", "residual"]);
    let rows: Vec<Vec<f64>> = rdr
        .records()
        .map(|r| r.unwrap().iter().map(|f| f.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 2);
    assert!((rows[0][0] + 2.0).abs() < 1e-12 && rows[0][1] == 0.0);
    assert!((rows[1][0] - 2.0).abs() < 1e-12 && rows[1][1] == 0.0);

    assert_eq!(code(&with("roots", &params("-4", "0", "1"), &["-n", "0"])), 2);
}

#[test]
fn roots_csv_round_trip() {
    let p = params("-27/4", "-7/8", "5/2");
    let csv_out = with("roots", &p, &["-n", "150", "--precision", "15"]);
    let json_out = with("roots", &p, &["-n", "150", "--format", "json"]);
    assert_eq!(code(&csv_out), 0);
    let doc = json(&json_out);
    let roots = doc["roots"].as_array().unwrap();
    assert_eq!(roots.len(), 150);
    let mut rdr = csv::Reader::from_reader(csv_out.stdout.as_slice());
    let mut scale = 0.0f64;
    let mut max_im = 0.0f64;
    for (rec, r) in rdr.records().zip(roots) {
        let rec = rec.unwrap();
        let re: f64 = rec[0].parse().unwrap();
        let im: f64 = rec[1].parse().unwrap();
        let want = r["re"].as_f64().unwrap();
        assert!((re - want).abs() <= 1e-14 * want.abs().max(1.0), "{re} vs {want}");
        assert!((im - r["im"].as_f64().unwrap()).abs() <= 1e-14 * want.abs().max(1.0));
        scale = scale.max(re.hypot(im));
        max_im = max_im.max(im.abs());
    }
    assert!(max_im <= 1e-6 * scale, "max |im| {max_im}");
}

#[test]
fn roots_off_axis_in_omega2() {
    let out = with("roots", &params("-9/20", "1", "-1/3"), &["-n", "70", "--format", "json"]);
    assert_eq!(code(&out), 0);
    assert!(json(&out)["max_imag"].as_f64().unwrap() > 1e-3);
}

fn assert_svg(path: &Path) -> String {
    let text = std::fs::read_to_string(path).unwrap();
    assert!(text.starts_with("<?xml") || text.starts_with("<svg"));
    assert!(text.trim_end().ends_with("</svg>"));
    assert!(!text.contains("href"), "external reference in {}", path.display());
    assert!(!text.contains("url("));
    text
}

#[test]
fn curve_svg_with_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("omega1.svg");
    let out = with("curve", &params("-13/4", "1", "-1/5"), &["-o", svg.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert_svg(&svg);
    let side: Value = serde_json::from_slice(&std::fs::read(dir.path().join("omega1.svg.json")).unwrap()).unwrap();
    assert_eq!(side["enclosure"]["enclosing"], true);
    assert_eq!(side["enclosure"]["simple"], true);

    let svg = dir.path().join("double.svg");
    let out = with("curve", &params("-2", "0", "1/3"), &["--roots", "30", "-o", svg.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert_svg(&svg);
    let side: Value = serde_json::from_slice(&std::fs::read(dir.path().join("double.svg.json")).unwrap()).unwrap();
    assert_eq!(side["enclosure"]["enclosing"], true);
    assert_eq!(side["enclosure"]["simple"], false);
}

#[test]
fn curve_json_lists_singular_points() {
    let out = run(&["classify", "-a", "-2", "-b", "0", "-g", "1/3"]);
    let pts = json(&out)["singular_points"].as_array().unwrap().clone();
    let mut xs: Vec<f64> = pts
        .iter()
        .filter(|p| p["y"].as_f64().unwrap().abs() < 1e-9)
        .map(|p| p["x"].as_f64().unwrap())
        .collect();
    xs.sort_by(f64::total_cmp);
    assert_eq!(xs.len(), 2, "{pts:?}");
    assert!((xs[0] + 1.0).abs() < 1e-9 && (xs[1] - 1.0).abs() < 1e-9);
}

#[test]
fn curve_orientation_is_mathematical() {
    let out = with("curve", &params("-13/4", "1", "-1/5"), &["--box=-9,9,1,9", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    let mut rdr = csv::Reader::from_reader(out.stdout.as_slice());
    assert_eq!(rdr.headers().unwrap(), vec!["component", "closed", "x", "y"]);
    let ys: Vec<f64> = rdr.records().map(|r| r.unwrap()[3].parse().unwrap()).collect();
    assert!(!ys.is_empty() && ys.iter().all(|&y| y >= 1.0));

    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("upper.svg");
    let out = with("curve", &params("-13/4", "1", "-1/5"), &["--box=-9,9,-9,9", "-o", svg.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let text = assert_svg(&svg);
    // Canvas y grows downward, so Im z > 0 lands in the top half.
    let dots: Vec<f64> = text
        .lines()
        .filter(|l| l.contains("<circle") && l.contains("#27ae60"))
        .map(|l| {
            let i = l.find("cy=\"").unwrap() + 4;
            l[i..].split('"').next().unwrap().parse().unwrap()
        })
        .collect();
    assert!(dots.iter().any(|&cy| cy < 300.0) && dots.iter().any(|&cy| cy > 340.0), "{dots:?}");
}

#[test]
fn curve_resolution_floor() {
    assert_eq!(code(&with("curve", &params("-2", "0", "1/3"), &["--res", "8"])), 2);
}

#[test]
fn limset_outputs() {
    let p = params("-27/4", "-7/8", "5/2");
    let out = with("limset", &p, &["--format", "json"]);
    assert_eq!(code(&out), 0);
    let doc = json(&out);
    assert!(doc["count"].as_u64().unwrap() > 0);
    let step = doc["step_x"].as_f64().unwrap().max(doc["step_y"].as_f64().unwrap());
    assert!(doc["max_abs_imag"].as_f64().unwrap() <= 2.0 * step);

    let out = with("limset", &p, &["--eps", "0", "--format", "json"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["count"], 0);

    let out = with("limset", &p, &["--res", "100"]);
    assert_eq!(code(&out), 0);
    let mut rdr = csv::Reader::from_reader(out.stdout.as_slice());
    assert_eq!(rdr.headers().unwrap(), vec!["re", "im", "gap"]);
    assert!(rdr.records().count() > 0);
}

#[test]
fn region_map_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("regions.svg");
    let out = run(&["region-map", "-o", svg.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert_svg(&svg);

    let out = run(&["region-map", "--format", "csv", "--res", "60"]);
    assert_eq!(code(&out), 0);
    let mut rdr = csv::Reader::from_reader(out.stdout.as_slice());
    let cells: Vec<(f64, f64, String)> = rdr
        .records()
        .map(|r| {
            let r = r.unwrap();
            (r[0].parse().unwrap(), r[1].parse().unwrap(), r[2].to_string())
        })
        .collect();
    assert_eq!(cells.len(), 3600);
    let nearest = |g: f64, v: f64| {
        cells
            .iter()
            .min_by(|a, b| ((a.0 - g).hypot(a.1 - v)).total_cmp(&(b.0 - g).hypot(b.1 - v)))
            .unwrap()
            .2
            .clone()
    };
    assert_eq!(nearest(-0.2, 0.4), "Omega1");
    assert_eq!(nearest(-1.0 / 3.0, -0.1), "Omega2");

    assert_eq!(code(&run(&["region-map", "--box=-0.5,-0.5,0,1"])), 2);
    assert_eq!(code(&run(&["region-map", "-b", "0"])), 2);
}

#[test]
fn verify_example_fixtures() {
    for (a, b, g) in [
        ("-27/4", "-7/8", "5/2"),
        ("-11", "9", "-8/3"),
        ("-26/10", "1", "-1/10"),
        ("-2", "2/10", "2/10"),
        ("-2", "0", "1/3"),
        ("-6", "-4", "-1"),
        ("-13/4", "1", "-1/5"),
        ("-9/20", "1", "-1/3"),
        ("3/4", "1", "-1/5"),
    ] {
        let out = with("verify", &params(a, b, g), &[]);
        assert_eq!(code(&out), 0, "({a}, {b}, {g}): {}", String::from_utf8_lossy(&out.stdout));
        let doc = json(&out);
        assert_eq!(doc["reports"][0]["overall"], true);
    }
}

#[test]
fn verify_gamma_list() {
    let out = with("verify", &params("-5", "4", "-13,-2,-0.7"), &[]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["reports"].as_array().unwrap().len(), 3);
}

#[test]
fn verify_is_deterministic() {
    let args = ["verify", "--region=-8,2,-3,3,-3,3", "--samples", "6", "--seed", "11"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(code(&a), code(&b));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["summary"]["total"], 6);
    assert_eq!(code(&run(&["verify", "--region=1,0,0,1,0,1"])), 2);
}

#[test]
fn format_mismatch_is_usage_error() {
    assert_eq!(code(&run(&["classify", "-a", "1", "-b", "1", "-g", "1", "--format", "svg"])), 2);
}
