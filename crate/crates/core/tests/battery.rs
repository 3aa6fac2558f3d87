use std::time::Instant;

use nborient_core::nb::{is_nb, is_nb_interior, NbStatus};
use nborient_core::orientation::{orientability_report, DEFAULT_RINGS};
use nborient_core::space::{default_corpus, parse_spec};

#[test]
fn corpus_battery() {
    for spec in default_corpus() {
        let t = Instant::now();
        let s = parse_spec(spec).unwrap();
        let nb = match &s.deleted {
            Some(a) => is_nb_interior(&s.complex, a).unwrap(),
            None => is_nb(&s.complex).unwrap(),
        };
        let r = orientability_report(&s.complex, &DEFAULT_RINGS).unwrap();
        println!(
            "{:40} {:?} f={:?} orient={:?} fals={:?} {:?}",
            s.name,
            nb.status,
            s.complex.f_vector(),
            r.rings.iter().map(|x| x.orientable).collect::<Vec<_>>(),
            r.falsifications,
            t.elapsed()
        );
        assert_ne!(nb.status, NbStatus::NotNb, "{spec}");
        assert!(r.falsifications.is_empty(), "{spec}");
    }
}
