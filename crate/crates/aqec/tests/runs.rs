use aqec::config::{ExperimentConfig, ExperimentId};
use aqec::grid::evaluate_grid;
use aqec::{Curve, Runner};
use aqec_core::bounds::{theorem2_bound, theorem5_lower, BoundInputs};

fn small(id: ExperimentId, overrides: &[(&str, &str)]) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::defaults(id, false);
    for (k, v) in overrides {
        *cfg.params.get_mut(*k).unwrap_or_else(|| panic!("{} has no key {}", id, k)) = v.to_string();
    }
    cfg
}

fn csv_bytes(curves: &[Curve]) -> Vec<Vec<u8>> {
    curves.iter().map(|c| c.to_csv().unwrap()).collect()
}

#[test]
fn results_do_not_depend_on_worker_count() {
    let cases = [
        small(ExperimentId::Fig4a, &[("sizes", "3"), ("taus", "0.1,0.3"), ("samples", "9000")]),
        small(ExperimentId::Fig3, &[("samples", "9000"), ("check_samples", "9000")]),
        small(ExperimentId::Fig5b, &[("sizes", "4"), ("times", "1,10"), ("samples", "5000")]),
    ];
    for cfg in cases {
        let one = aqec::evaluate(&cfg, &Runner::new(1).unwrap()).unwrap();
        let three = aqec::evaluate(&cfg, &Runner::new(3).unwrap()).unwrap();
        assert_eq!(csv_bytes(&one), csv_bytes(&three), "{}", cfg.experiment);
    }
}

#[test]
fn seed_changes_monte_carlo_output() {
    let mut cfg = small(ExperimentId::Fig4a, &[("sizes", "3"), ("taus", "0.2"), ("samples", "5000")]);
    let runner = Runner::new(2).unwrap();
    let a = aqec::evaluate(&cfg, &runner).unwrap();
    cfg.seed += 1;
    let b = aqec::evaluate(&cfg, &runner).unwrap();
    assert_ne!(csv_bytes(&a), csv_bytes(&b));
}

#[test]
fn run_then_verify_then_tamper() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = small(ExperimentId::FigE8, &[]);
    cfg.output = dir.path().join("e8");
    cfg.workers = Some(1);
    let report = aqec::run(&cfg).unwrap();
    assert_eq!(report.manifest.workers, 1);
    let v = aqec::verify(&report.manifest_path).unwrap();
    assert!(v.passed(), "{:?}", v.checks.iter().map(|c| &c.detail).collect::<Vec<_>>());
    assert!(v.files.iter().all(|(_, p)| p.is_none()));

    let victim = &report.manifest.files[0].name;
    let path = cfg.output.join(victim);
    let mut text = std::fs::read_to_string(&path).unwrap();
    text.push_str("1,2\n");
    std::fs::write(&path, text).unwrap();
    let v = aqec::verify(&report.manifest_path).unwrap();
    assert!(!v.passed());
    let bad: Vec<&String> = v.files.iter().filter(|(_, p)| p.is_some()).map(|(n, _)| n).collect();
    assert_eq!(bad, vec![victim]);

    std::fs::remove_file(&path).unwrap();
    assert!(matches!(aqec::verify(&report.manifest_path), Err(aqec::AppError::Usage(_))));
}

#[test]
fn rerun_from_manifest_reproduces_files() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = small(ExperimentId::Fig4a, &[("sizes", "3"), ("taus", "0.1,0.2"), ("samples", "3000")]);
    cfg.output = dir.path().join("a");
    let first = aqec::run(&cfg).unwrap();
    let again = first.manifest.to_config(&dir.path().join("b")).unwrap();
    let second = aqec::run(&again).unwrap();
    let hashes = |m: &aqec::Manifest| m.files.iter().map(|f| f.sha256.clone()).collect::<Vec<_>>();
    assert_eq!(hashes(&first.manifest), hashes(&second.manifest));
}

#[test]
fn grid_matches_direct_calls() {
    let input = "op,ell,kappa,delta,n,t,a,tau_c\n\
                 theorem2,3,1,0.01,20,5,,\n\
                 theorem5,,2,,,4,0.25,0.12\n";
    let mut out = Vec::new();
    assert_eq!(evaluate_grid(input.as_bytes(), &mut out).unwrap(), 2);
    let mut rdr = csv::Reader::from_reader(out.as_slice());
    let header = rdr.headers().unwrap().clone();
    assert_eq!(header.iter().next_back(), Some("value"));
    let vals: Vec<f64> = rdr.records().map(|r| r.unwrap().iter().next_back().unwrap().parse().unwrap()).collect();
    let t2 = theorem2_bound(&BoundInputs::new(3, 1.0, 0.01, 20.0), 5.0).unwrap();
    let t5 = theorem5_lower(0.25, 0.12, 2.0, 4.0).unwrap();
    assert!((vals[0] - t2).abs() <= 1e-15 * t2.abs().max(1.0), "{} vs {}", vals[0], t2);
    assert!((vals[1] - t5).abs() <= 1e-15 * t5.abs().max(1.0), "{} vs {}", vals[1], t5);
}

#[test]
fn grid_rejects_bad_rows() {
    let mut out = Vec::new();
    assert!(evaluate_grid("op,ell,kappa,delta,n,t\nnope,1,1,1,1,1\n".as_bytes(), &mut out).is_err());
    assert!(evaluate_grid("op,ell,kappa,delta,n\ntheorem1,1,1,0.1,3\n".as_bytes(), &mut out).is_err());
    assert!(evaluate_grid("op,ell,kappa,delta,n,t\ntheorem1,1,x,0.1,3,1\n".as_bytes(), &mut out).is_err());
}
