use std::sync::Arc;

use kbeta::bss::{self, check_axiom_b, page_one, page_one_ordered, turn_page, BssError, DiffTable, Page};
use kbeta::catalog::{self, CatalogKey};
use kbeta::gca::{Monomial, QuotientRing};

fn ring(key: &CatalogKey, cap: u32) -> Arc<QuotientRing> {
    Arc::new(QuotientRing::new(catalog::load(key).unwrap(), cap))
}

fn trivial(len: usize) -> Vec<usize> {
    let mut v = vec![0; len];
    v[0] = 1;
    v
}

#[test]
fn cyclic_group_of_order_p() {
    for p in [3, 5] {
        let pages = bss::pages(ring(&CatalogKey::cyclic(p, 1), 8), 2).unwrap();
        assert_eq!(pages[0].dims(), vec![1; 9]);
        assert_eq!(pages[0].differential(1).rank(), 1);
        assert_eq!(pages[1].dims()[..8], trivial(8)[..]);
    }
}

#[test]
fn cyclic_group_of_order_p_squared_collapses_on_page_three() {
    let pages = bss::pages(ring(&CatalogKey::cyclic(3, 2), 9), 3).unwrap();
    assert!(pages[0].differential(1).is_zero());
    assert!(pages[1].dims().iter().all(|&d| d == 1));
    assert_eq!(pages[2].dims()[..8], trivial(8)[..]);
}

#[test]
fn higher_cyclic_pages() {
    for i in 1..=3 {
        let pages = bss::pages(ring(&CatalogKey::cyclic(3, i), 8 + i), i + 1).unwrap();
        assert_eq!(pages[i as usize].dims()[..9], trivial(9)[..], "i = {i}");
    }
}

fn turn_all(first: Page, ring: &QuotientRing, count: u32) -> Vec<Page> {
    let mut out = vec![first];
    for i in 2..=count {
        let next = turn_page(out.last().unwrap(), &DiffTable::from_presentation(ring, i)).unwrap();
        out.push(next);
    }
    out
}

#[test]
fn dimensions_do_not_depend_on_representatives() {
    let cases = [
        (CatalogKey::p33(), 2),
        (CatalogKey::ppn(3, 4), 2),
        (CatalogKey::ppn(3, 5), 3),
        (CatalogKey::tower(3, 2), 3),
        (CatalogKey::tower(3, 3), 4),
    ];
    for (key, count) in cases {
        let r = ring(&key, 8);
        let forward = turn_all(page_one(r.clone(), 8).unwrap(), &r, count);
        let backward = turn_all(page_one_ordered(r.clone(), 8, true).unwrap(), &r, count);
        for (a, b) in forward.iter().zip(&backward) {
            assert_eq!(a.dims(), b.dims(), "{key} page {}", a.index());
        }
    }
}

#[test]
fn every_page_squares_to_zero() {
    for (key, count) in [(CatalogKey::ppn(3, 5), 3), (CatalogKey::ppn(3, 6), 4), (CatalogKey::p33(), 2)] {
        for page in bss::pages(ring(&key, 8), count).unwrap() {
            assert!(page.check_d_squared().iter().all(|c| c.passed()), "{key} page {}", page.index());
        }
    }
}

#[test]
fn yy_survives_to_the_page_of_u() {
    for n in [5, 6] {
        let r = ring(&CatalogKey::ppn(3, n), 8);
        let pages = bss::pages(r.clone(), n - 2).unwrap();
        let idx = |s: &str| r.presentation().generator_index(s).unwrap();
        let yy = r.algebra().mul(&r.algebra().gen(idx("y")), &r.algebra().gen(idx("y'")));
        let page = &pages[n as usize - 4];
        assert!(page.is_nonzero_class(&yy, 2).unwrap(), "n = {n}");
        // on the next page yy' is hit by u
        assert!(!pages[n as usize - 3].is_nonzero_class(&yy, 2).unwrap_or(false), "n = {n}");
    }
}

#[test]
fn listed_values_must_survive() {
    let r = ring(&CatalogKey::ppn(3, 5), 8);
    let p1 = page_one(r.clone(), 8).unwrap();
    let pres = r.presentation();
    let u = Monomial::generator(r.algebra().ngens(), pres.generator_index("u").unwrap());
    // x = β(y) is a boundary, so d(u) = x is d(u) = 0
    let boundary = turn_page(&p1, &DiffTable::new().with_entry(u.clone(), pres.parse("x").unwrap())).unwrap();
    let zero = turn_page(&p1, &DiffTable::new()).unwrap();
    assert_eq!(boundary.dims(), zero.dims());
    // β(yu) = xu is not zero, so yu is not a page-two class
    let got = turn_page(&p1, &DiffTable::new().with_entry(u, pres.parse("y*u").unwrap()));
    assert!(matches!(got, Err(BssError::TableValueDead { .. })), "{:?}", got.map(|p| p.dims()));
}

#[test]
fn axiom_b_on_the_catalog_has_no_mismatches() {
    for key in [CatalogKey::tower(3, 1), CatalogKey::tower(3, 2), CatalogKey::cyclic(3, 2), CatalogKey::ppn(3, 5)] {
        let pages = bss::pages(ring(&key, 9), 3).unwrap();
        let report = check_axiom_b(&pages).unwrap();
        assert_eq!(report.mismatches().count(), 0, "{key}");
    }
}

#[test]
fn tower_report_passes_for_p3() {
    let cat = catalog::Catalog::embedded();
    for n in [4, 5, 6] {
        let report = bss::tower_report(&cat, 3, n, 8).unwrap();
        assert!(report.passed(), "n = {n}: {:?}", kbeta::report::first_failure(&report.checks));
    }
}
