use aqec::opfile::{decode, decode_channel, encode, encode_channel, load_channel, save_channel, MAGIC};
use aqec::output::{read_outputs, sha256_hex, write_outputs, FileStatus};
use aqec::{Curve, ExperimentConfig, ExperimentId, Manifest, Point};
use aqec_core::lindblad::{stabilizer_recovery, CMat};
use aqec_core::five_qubit_code;
use num_complex::Complex64;
use proptest::prelude::*;

fn sample_curve() -> Curve {
    let mut c = Curve::new("alpha_L3").param("size", 3).param("n_samples", 1000);
    c.push(Point::with_err(0.1, 0.125, 0.01));
    c.push(Point::with_err(0.2, 1.0 / 3.0, 1e-17));
    c.push(Point::with_err(1e-300, 5e-324, 0.0));
    c
}

#[test]
fn csv_round_trip_is_exact() {
    let c = sample_curve();
    let bytes = c.to_csv().unwrap();
    let text = String::from_utf8(bytes.clone()).unwrap();
    assert!(text.starts_with("x,y,stderr,size,n_samples\n"), "{}", text);
    assert_eq!(Curve::from_csv("alpha_L3", &bytes).unwrap(), c);
}

#[test]
fn csv_without_errors_has_two_columns() {
    let mut c = Curve::new("line");
    c.push(Point::new(1.0, 2.0));
    let text = String::from_utf8(c.to_csv().unwrap()).unwrap();
    assert_eq!(text, "x,y\n1,2\n");
    assert!(Curve::from_csv("line", b"x,y\n1,oops\n").is_err());
}

proptest! {
    #[test]
    fn csv_round_trip_prop(pts in prop::collection::vec((-1e6f64..1e6, -1e6f64..1e6, 0f64..10.0), 1..20)) {
        let mut c = Curve::new("p").param("k", "v");
        for (x, y, e) in pts {
            c.push(Point::with_err(x, y, e));
        }
        prop_assert_eq!(Curve::from_csv("p", &c.to_csv().unwrap()).unwrap(), c);
    }

    #[test]
    fn opfile_round_trip_prop(
        shapes in prop::collection::vec((1usize..5, 1usize..5), 0..4),
        seed in any::<u64>(),
    ) {
        let mut s = seed;
        let mut next = move || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (s >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        let ops: Vec<CMat> = shapes
            .iter()
            .map(|&(r, c)| CMat::from_fn(r, c, |_, _| Complex64::new(next(), next())))
            .collect();
        prop_assert_eq!(decode(&encode(&ops)).unwrap(), ops);
    }
}

#[test]
fn opfile_rejects_damage() {
    let ops = vec![CMat::identity(3, 3), CMat::zeros(2, 4)];
    let good = encode(&ops);
    assert_eq!(&good[..4], &MAGIC);
    let mut bad_magic = good.clone();
    bad_magic[0] = b'X';
    assert!(decode(&bad_magic).is_err());
    let mut bad_version = good.clone();
    bad_version[4] = 9;
    assert!(decode(&bad_version).is_err());
    for cut in [0, 3, 10, good.len() - 1] {
        assert!(decode(&good[..cut]).is_err(), "truncated at {}", cut);
    }
    let mut trailing = good.clone();
    trailing.push(0);
    assert!(decode(&trailing).is_err());
    let mut huge = good;
    huge[12..20].copy_from_slice(&u64::MAX.to_le_bytes());
    assert!(decode(&huge).is_err());
}

#[test]
fn channel_file_round_trip() {
    let (_, rec) = stabilizer_recovery(&five_qubit_code(), 1).unwrap();
    let back = decode_channel(&encode_channel(&rec)).unwrap();
    assert_eq!(back.kraus(), rec.kraus());
    assert_eq!(back.completion().is_some(), rec.completion().is_some());
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("five.aqop");
    save_channel(&path, &rec).unwrap();
    let loaded = load_channel(&path).unwrap();
    let rho = CMat::identity(32, 32) / Complex64::new(32.0, 0.0);
    let diff = (loaded.apply(&rho) - rec.apply(&rho)).iter().map(|z| z.norm()).fold(0.0, f64::max);
    assert_eq!(diff, 0.0);
    assert_eq!(decode_channel(&encode(rec.kraus())).unwrap().kraus(), rec.kraus());
    assert!(decode(&encode_channel(&rec)).is_err());
}

#[test]
fn manifest_records_hashes_and_detects_corruption() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = ExperimentConfig::defaults(ExperimentId::Fig4a, false);
    cfg.output = dir.path().join("run");
    let curves = vec![sample_curve(), Curve::new("empty")];
    let (path, manifest) = write_outputs(&cfg, &curves, 2, 0.5).unwrap();
    assert_eq!(Manifest::load(&path).unwrap(), manifest);
    assert_eq!(manifest.files[0].name, "fig4a_alpha_L3.csv");
    assert_eq!(manifest.files[0].sha256, sha256_hex(&curves[0].to_csv().unwrap()));
    assert_eq!(manifest.workers, 2);
    assert_eq!(manifest.to_config(&cfg.output).unwrap().to_text(), cfg.to_text());

    let status = read_outputs(&cfg.output, &manifest).unwrap();
    assert!(matches!(&status[0].1, FileStatus::Ok(c) if *c == curves[0]));

    std::fs::write(cfg.output.join("fig4a_empty.csv"), "x,y\n0,1\n").unwrap();
    std::fs::remove_file(cfg.output.join("fig4a_alpha_L3.csv")).unwrap();
    let status = read_outputs(&cfg.output, &manifest).unwrap();
    assert_eq!(status[0].1, FileStatus::Missing);
    assert!(matches!(status[1].1, FileStatus::Corrupted { .. }));
}

#[test]
fn sha256_known_vector() {
    assert_eq!(sha256_hex(b"abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}
