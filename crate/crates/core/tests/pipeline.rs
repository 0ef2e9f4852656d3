use graphcode::bincode::BinaryCode;
use graphcode::factorize::kotzig_p1f;
use graphcode::treecode::{build_hamming_treecode, build_treecode, Coloring, GeneratorFile};

#[test]
fn generator_rebuilds_the_same_family() {
    let f = kotzig_p1f(23).unwrap();
    let p = build_treecode(23, 3, &f, Coloring::Syndrome, Some(5)).unwrap();
    let gen = GeneratorFile::from_json(&p.generator(Some(23), Some("h.json".into()), Some(5)).to_json().unwrap()).unwrap();
    let h = BinaryCode::from_json(&p.h_code().unwrap().to_json().unwrap()).unwrap();
    let q = gen.build(&f, Some(h)).unwrap();
    assert_eq!(q.family_size(), p.family_size());
    for rank in [0u128, 1, 77, p.family_size() - 1] {
        let id = p.member_id(rank).unwrap();
        assert_eq!(p.member(id).unwrap(), q.member(id).unwrap());
    }
    let report = q.verify_pairs(&q.sample_pairs(200, 9));
    assert_eq!((report.checked, report.passed), (200, 200));
}

#[test]
fn hamming_generator_needs_no_code_file() {
    let f = kotzig_p1f(31).unwrap();
    let p = build_hamming_treecode(5, 4, &f).unwrap();
    let gen = GeneratorFile::from_json(&p.generator(Some(31), None, None).to_json().unwrap()).unwrap();
    let q = gen.build(&f, None).unwrap();
    let report = q.verify_pairs(&q.sample_pairs(100, 1));
    assert!(report.failures.is_empty());
}
