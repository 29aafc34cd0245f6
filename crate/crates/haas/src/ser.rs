use fewroots_core::{Interval, Rational};
use serde::{Serialize, Serializer};

pub fn rational<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

pub fn interval<S: Serializer>(i: &Interval, s: S) -> Result<S::Ok, S::Error> {
    [i.lo(), i.hi()].serialize(s)
}

pub fn interval_pair<S: Serializer>(p: &[Interval; 2], s: S) -> Result<S::Ok, S::Error> {
    [[p[0].lo(), p[0].hi()], [p[1].lo(), p[1].hi()]].serialize(s)
}
