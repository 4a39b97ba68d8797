use std::sync::Arc;

use kbeta::catalog::{self, Catalog, CatalogError, CatalogKey, Family};
use kbeta::gca::{format, Monomial, QuotientRing};
use kbeta::rigidity::{self, H1Mode};

#[test]
fn shipped_files_match_the_transcription() {
    for key in catalog::shipped_keys() {
        let shipped = catalog::embedded_text(&key).unwrap();
        let fresh = format::to_string(&catalog::transcribe(&key).unwrap());
        assert_eq!(shipped.trim_end(), fresh.trim_end(), "{key}");
    }
}

#[test]
fn shipped_files_round_trip() {
    for key in catalog::shipped_keys() {
        let pres = catalog::load(&key).unwrap();
        let again = format::from_str(&format::to_string(&pres)).unwrap();
        assert_eq!(format::to_string(&again), format::to_string(&pres), "{key}");
    }
}

#[test]
fn load_external_reads_a_shipped_file() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    let key = CatalogKey::p33();
    let path = dir.join(key.file_name());
    std::fs::write(&path, catalog::embedded_text(&key).unwrap()).unwrap();
    let pres = catalog::load_external(&path).unwrap();
    assert_eq!(format::to_string(&pres), format::to_string(&catalog::load(&key).unwrap()));
}

#[test]
fn inhomogeneous_relation_is_a_parse_error_naming_it() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    let mut doc: serde_json::Value = serde_json::from_str(catalog::embedded_text(&CatalogKey::p33()).unwrap()).unwrap();
    // y*y' + y mixes degrees 2 and 1
    doc["relations"][0].as_array_mut().unwrap().push(serde_json::json!({"coeff": 1, "monomial": {"y": 1}}));
    let path = dir.join("bad.json");
    std::fs::write(&path, serde_json::to_string(&doc).unwrap()).unwrap();
    match catalog::load_external(&path) {
        Err(CatalogError::Parse { source, .. }) => {
            let msg = source.to_string();
            assert!(msg.contains("relations[0]") && msg.contains("y*y' = 0"), "{msg}");
            assert!(msg.contains("not homogeneous"), "{msg}");
        }
        other => panic!("expected a parse error, got {other:?}"),
    }
}

#[test]
fn scaled_c2_file_keeps_the_forced_steps() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    let pres = catalog::pp3_scaled(5, 2, 3).unwrap();
    let path = dir.join("Pp3_p5_lambda2.json");
    std::fs::write(&path, format::to_string(&pres)).unwrap();
    let loaded = catalog::load_external(&path).unwrap();
    let report = catalog::validate_presentation(loaded.clone(), 14);
    assert!(report.passed(), "{:?}", kbeta::report::first_failure(&report.checks));

    let ring = Arc::new(QuotientRing::new(loaded, 14));
    let pr = rigidity::propagate(&ring, &H1Mode::FixIdentity, 8).unwrap();
    let ngens = ring.algebra().ngens();
    let idx = |n: &str| ring.presentation().generator_index(n).unwrap();
    for name in ["x", "x'"] {
        assert!(pr.image_is(&ring, idx(name), &ring.algebra().gen(idx(name))), "{name}");
    }
    for name in ["Y", "Y'"] {
        assert!(pr.image_is_multiple_of(&ring, idx(name), &Monomial::generator(ngens, idx(name))), "{name}");
    }
    let a = pr.coordinate(&ring, idx("c_4"), &Monomial::generator(ngens, idx("c_4"))).unwrap();
    assert_eq!(a.as_constant(), Some(1));
}

#[test]
fn data_dir_overrides_the_embedded_copy() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    let key = CatalogKey::p33();
    let pres = catalog::load(&key).unwrap().without_relation(0);
    std::fs::write(dir.join(key.file_name()), format::to_string(&pres)).unwrap();
    let cat = Catalog::with_dir(dir);
    assert_eq!(cat.load(&key).unwrap().relations().len(), pres.relations().len());
    // other keys fall back to the embedded files
    assert!(cat.load(&CatalogKey::ppn(3, 4)).is_ok());
}

#[test]
fn keys_outside_the_families_are_rejected() {
    assert!(CatalogKey::new(Family::Ppn, 3, Some(3), None).is_err());
    assert!(CatalogKey::new(Family::Pp3, 3, None, None).is_err());
    assert!(CatalogKey::new(Family::P33, 4, None, None).is_err());
    assert!(CatalogKey::new(Family::Tower, 3, None, None).is_err());
    assert!(catalog::load(&CatalogKey::ppn(7, 4)).is_err());
}

#[test]
fn every_shipped_presentation_validates_at_its_default_cap() {
    for key in catalog::shipped_keys() {
        let cap = if key.p == 3 { 8 } else { 14 };
        let report = catalog::validate(&Catalog::embedded(), &key, cap).unwrap();
        assert!(report.passed(), "{key}: {:?}", kbeta::report::first_failure(&report.checks));
    }
}
