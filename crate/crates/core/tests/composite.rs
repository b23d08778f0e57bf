use ellcode_core::ecp::{channel_corrupt, CompositeScheme};
use ellcode_core::field::FieldElem;
use ellcode_core::pipeline::{Instance, InstanceConfig};
use ellcode_core::seed::rng_for;

fn small_instance() -> Instance {
    let cfg = InstanceConfig::from_json(
        r#"{"p":5,"a":0,"b":1,"N":6,"m":40,"level_degree":6,"seed":3,"mode":"probabilistic"}"#,
    )
    .unwrap();
    Instance::build(&cfg).unwrap()
}

fn random_word(scheme: &CompositeScheme, seed: u64) -> Vec<FieldElem> {
    let f = scheme.base_point.level();
    let mut rng = rng_for(seed, "word");
    (0..scheme.word_dim()).map(|_| f.random(&mut rng)).collect()
}

#[test]
fn clean_transmission_round_trips() {
    let inst = small_instance();
    let scheme = inst.scheme.as_ref().unwrap();
    let f = random_word(scheme, 1);
    let out = scheme.decode(&scheme.encode(&f).unwrap()).unwrap();
    assert_eq!(out.word, Some(f));
    assert!(out.failed_factors().is_empty());
}

#[test]
fn overweight_factor_is_reported() {
    let inst = small_instance();
    let scheme = inst.scheme.as_ref().unwrap();
    let mut rng = rng_for(2, "channel");
    let f = random_word(scheme, 2);
    let sent = scheme.encode(&f).unwrap();
    let (bad_r, cap) = (3, scheme.factor(3).unwrap().pair.t);
    let n = sent[0].1.len();
    let rx: Vec<_> = sent
        .into_iter()
        .map(|(r, c)| {
            let w = if r == bad_r { n - 1 } else { scheme.capacity() };
            (r, channel_corrupt(&c, w, &mut rng).unwrap())
        })
        .collect();
    let out = scheme.decode(&rx).unwrap();
    assert!(cap < n - 1);
    assert_eq!(out.word, None);
    assert_eq!(out.failed_factors(), vec![bad_r]);
}
