use std::fs;
use std::path::Path;

use pir::dataio::*;
use pir::Error;
use pir_core::intervals::Level;
use pir_core::Dataset;
use proptest::prelude::*;

fn write(dir: &Path, name: &str, body: &str) -> std::path::PathBuf {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p
}

#[test]
fn toy_file_read_verbatim() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "toy.csv", "a,b,c\n1.5,2,x\n-3,4e1,y\n");
    let d = read_csv(&p, &CsvSchema::new("b", &["a"])).unwrap();
    assert_eq!(d.y(), &[2.0, 40.0]);
    assert_eq!(d.predictors(1), &[-3.0]);
    assert_eq!(d.predictor_names(), &["a".to_string()]);
}

#[test]
fn unit_scale_applies_to_every_column() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "toy.csv", "f,s\n60,70\n65,68\n");
    let d = read_csv(&p, &fixture_schema()).unwrap_err();
    assert!(matches!(d, Error::MissingColumn { ref column, .. } if column == "son"), "{d}");
    let d = read_csv(&p, &CsvSchema::new("s", &["f"]).with_unit_scale(2.54)).unwrap();
    assert!((d.y()[0] - 177.8).abs() < 1e-12);
    assert!((d.predictors(1)[0] - 165.1).abs() < 1e-12);
}

#[test]
fn headerless_and_delimiter() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "t.tsv", "1\t10\n2\t20\n3\t31\n");
    let s = CsvSchema::new("2", &["1"]).with_delimiter(b'\t').without_header();
    let d = read_csv(&p, &s).unwrap();
    assert_eq!(d.y(), &[10.0, 20.0, 31.0]);
}

#[test]
fn parse_error_cites_row_and_column() {
    let dir = tempfile::tempdir().unwrap();
    let mut body = String::from("x,y\n");
    for i in 1..=10 {
        if i == 7 {
            body.push_str("7,abc\n");
        } else {
            body.push_str(&format!("{i},{}\n", 2 * i));
        }
    }
    let p = write(dir.path(), "bad.csv", &body);
    let e = read_csv(&p, &CsvSchema::new("y", &["x"])).unwrap_err();
    match &e {
        Error::Parse { row, column, value, .. } => {
            assert_eq!((*row, column.as_str(), value.as_str()), (7, "y", "abc"));
        }
        other => panic!("{other:?}"),
    }
    assert!(e.to_string().contains("row 7"));
    assert_eq!(e.exit_code(), 3);
}

#[test]
fn missing_cell_is_a_parse_error() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "gap.csv", "x,y\n1,2\n2,\n");
    assert!(matches!(read_csv(&p, &CsvSchema::new("y", &["x"])), Err(Error::Parse { row: 2, .. })));
}

#[test]
fn empty_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "empty.csv", "");
    assert!(matches!(read_csv(&p, &CsvSchema::new("y", &[])), Err(Error::EmptyFile(_))));
    let p = write(dir.path(), "header.csv", "x,y\n");
    let e = read_csv(&p, &CsvSchema::new("y", &["x"])).unwrap_err();
    assert!(matches!(e, Error::Data { source: pir_core::Error::InsufficientData { .. }, .. }), "{e:?}");
    let e = read_csv(&dir.path().join("absent.csv"), &CsvSchema::new("y", &[])).unwrap_err();
    assert!(e.to_string().contains("absent.csv"));
}

#[test]
fn schema_validation() {
    assert!(CsvSchema::new("y", &["y"]).validate().is_err());
    assert!(CsvSchema::new("y", &["x", "x"]).validate().is_err());
    assert!(CsvSchema::new("y", &["x"]).with_unit_scale(0.0).validate().is_err());
    assert!(CsvSchema::new("y", &["x"]).validate().is_ok());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn write_then_read_is_identity(
        rows in prop::collection::vec((-1e6f64..1e6, -1e3f64..1e3, 1e-3f64..1e9), 2..40),
        scale in prop_oneof![Just(1.0), Just(2.54), 1e-3f64..1e3],
    ) {
        let y: Vec<f64> = rows.iter().map(|r| r.0).collect();
        let x: Vec<Vec<f64>> = rows.iter().map(|r| vec![r.1, r.2]).collect();
        let data = Dataset::new(y, x, vec!["a".into(), "b".into()]).unwrap();
        let schema = CsvSchema::new("out", &["a", "b"]).with_unit_scale(scale);
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("rt.csv");
        write_csv(&p, &data, &schema).unwrap();
        let back = read_csv(&p, &schema).unwrap();
        prop_assert_eq!(back.n(), data.n());
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-12 * a.abs().max(b.abs());
        for i in 0..data.n() {
            prop_assert!(close(back.y()[i], data.y()[i]));
            for j in 0..2 {
                prop_assert!(close(back.predictors(i)[j], data.predictors(i)[j]));
            }
        }
    }
}

/// A file shaped like the fixture: 1078 rows of plausible heights in
/// inches. Not the real data.
fn fixture_like(dir: &Path) -> std::path::PathBuf {
    let mut body = String::from("father,son\n");
    let mut state = 12345u64;
    let mut u = || {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((state >> 11) as f64 + 0.5) / (1u64 << 53) as f64
    };
    for _ in 0..FIXTURE_ROWS {
        let z1 = (-2.0 * u().ln()).sqrt() * (2.0 * std::f64::consts::PI * u()).cos();
        let z2 = (-2.0 * u().ln()).sqrt() * (2.0 * std::f64::consts::PI * u()).cos();
        let f = 67.7 + 2.7 * z1;
        let s = 68.7 + 2.8 * (0.5 * z1 + 0.75f64.sqrt() * z2);
        body.push_str(&format!("{f:.1},{s:.1}\n"));
    }
    let p = dir.join("father_son.csv");
    fs::write(&p, &body).unwrap();
    p
}

fn pin(p: &Path) {
    let digest = sha256_hex(&fs::read(p).unwrap());
    fs::write(checksum_path(p), format!("{digest}  father_son.csv\n")).unwrap();
}

#[test]
fn fixture_checksum_is_enforced() {
    let dir = tempfile::tempdir().unwrap();
    let p = fixture_like(dir.path());
    assert!(matches!(load_fixture(&p), Err(Error::Fixture { .. })), "no pin yet");
    pin(&p);
    let d = load_fixture(&p).unwrap();
    assert_eq!(d.n(), FIXTURE_ROWS);
    assert!(d.y().iter().all(|&v| v > 100.0), "converted to cm");

    let mut bytes = fs::read(&p).unwrap();
    let last = bytes.len() - 2;
    bytes[last] = if bytes[last] == b'1' { b'2' } else { b'1' };
    fs::write(&p, &bytes).unwrap();
    assert!(matches!(load_fixture(&p), Err(Error::Checksum { .. })));
    assert!(matches!(validate_fixture(&p, Level::DEFAULT), Err(Error::Checksum { .. })));
}

#[test]
fn fixture_row_count_is_enforced() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "father_son.csv", "father,son\n65,66\n70,69\n");
    pin(&p);
    assert!(matches!(load_fixture(&p), Err(Error::Fixture { .. })));
}

#[test]
fn example_report_is_self_consistent() {
    let dir = tempfile::tempdir().unwrap();
    let p = fixture_like(dir.path());
    pin(&p);
    let r = validate_fixture(&p, Level::DEFAULT).unwrap();
    assert_eq!(r.n, FIXTURE_ROWS);
    assert!((r.rho_hat * r.rho_hat - r.r2).abs() < 1e-12);
    for k in 0..2 {
        let x = EXAMPLE_POINTS[k];
        let a = &r.pi_approx[k];
        assert!((a.center - (r.beta0 + r.beta1 * x)).abs() < 1e-9);
        assert!((a.width() - r.width_pi_approx).abs() < 1e-9);
        assert!(r.pi_exact[k].width() > a.width());
    }
    assert!((r.mpi_approx.center - r.mu_y).abs() < 1e-9);
    assert!((r.mpi_approx.width() - r.width_mpi_approx).abs() < 1e-9);
    assert!((r.pir_tilde - (1.0 - r.width_pi_approx / r.width_mpi_approx)).abs() < 1e-12);
    assert!((r.pir_tilde - (1.0 - r.sigma_eps / r.sigma_y)).abs() < 1e-12);
    assert!(r.covered_conditional_exact >= r.covered_conditional_approx);
    assert!(r.covered_marginal_exact >= r.covered_marginal_approx);
    let frac = r.covered_conditional_exact as f64 / r.n as f64;
    assert!((frac - 0.95).abs() < 0.03, "{frac}");
}

#[test]
fn example_needs_one_predictor() {
    let d = Dataset::new(vec![1.0, 2.0, 4.0], vec![vec![1.0, 0.0], vec![2.0, 1.0], vec![3.0, 0.5]], vec!["a".into(), "b".into()])
        .unwrap();
    assert!(validate_example(&d, Level::DEFAULT).is_err());
}
