use k3kit::formats::{read_config, read_lattice, read_model, write_lattice, ConfigFile, ModelFile};
use k3kit_core::fibration::WeierstrassModel;
use k3kit_core::lattice::{lambda_tilde_d, IntegralLattice};
use k3kit_core::matrix::Matrix;
use k3kit_core::poly::Poly;
use k3kit_core::stablemap::chain_config;
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

#[test]
fn big_entries_round_trip_exactly() {
    let big: BigInt = "123456789012345678901234567890".parse().unwrap();
    let gram = Matrix::from_rows(vec![vec![big.clone() * 2, BigInt::from(1)], vec![BigInt::from(1), BigInt::from(-2)]])
        .unwrap();
    let l = IntegralLattice::new(gram).unwrap();
    let text = write_lattice(&l, Some("big"));
    assert!(text.contains("\"246913578024691357802469135780\""));
    let (back, name) = read_lattice(&text).unwrap();
    assert_eq!(back, l);
    assert_eq!(name.as_deref(), Some("big"));
    assert_eq!(write_lattice(&back, Some("big")), text);
}

#[test]
fn lattice_import_errors() {
    assert!(read_lattice(r#"{"rank": 2, "gram": [[0, 1]]}"#).is_err());
    assert!(read_lattice(r#"{"rank": 2, "gram": [[0, 1], [2, 0]]}"#).is_err());
    assert!(read_lattice(r#"{"rank": 1, "gram": [["x"]]}"#).is_err());
    let (l, name) = read_lattice(r#"{"rank": 1, "gram": [["-4"]]}"#).unwrap();
    assert_eq!(l.det(), &BigInt::from(-4));
    assert!(name.is_none());
}

#[test]
fn model_round_trip() {
    let half = BigRational::new(1.into(), 2.into());
    let a = Poly::new(vec![half.clone(), BigRational::from_integer(3.into())]);
    let b = Poly::from_ints(&[1, 0, -1]);
    let m = WeierstrassModel::new(a, b).unwrap();
    let text = serde_json::to_string(&ModelFile::from_model(&m)).unwrap();
    assert_eq!(text, r#"{"a":["1/2","3"],"b":["1","0","-1"]}"#);
    assert_eq!(read_model(&text).unwrap(), m);
    assert!(read_model(r#"{"a": ["1/0"], "b": ["1"]}"#).is_err());
    assert!(read_model(r#"{"a": [], "b": [1,0,0,0,0,0,0,0,0,1]}"#).is_err());
}

#[test]
fn config_round_trip() {
    let cfg = chain_config(3).unwrap();
    let text = serde_json::to_string(&ConfigFile::from(&cfg)).unwrap();
    assert!(text.starts_with(r#"{"components":[{"genus":1,"kind":"FIBER","ndeg":0}"#));
    assert_eq!(read_config(&text).unwrap(), cfg);
    assert!(read_config(r#"{"components":[{"genus":0,"kind":"CUSP","ndeg":0}]}"#).is_err());
}

proptest! {
    #[test]
    fn lattice_export_import_export_is_identity(d in 1i64..=10, scale in 1i64..=1_000_000) {
        let l = lambda_tilde_d(2 * d).unwrap();
        let scaled = k3kit_core::lattice::twist(&l, scale * scale).unwrap();
        let text = write_lattice(&scaled, None);
        let (back, _) = read_lattice(&text).unwrap();
        prop_assert_eq!(&back, &scaled);
        prop_assert_eq!(write_lattice(&back, None), text);
    }
}
