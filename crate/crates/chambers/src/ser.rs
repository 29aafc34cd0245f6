//! Serialization helpers: rationals as strings, intervals as `[lo, hi]`.

use fewroots_core::{Interval, Rational};
use fewroots_toric::ProjectiveParam;
use serde::ser::SerializeTuple;
use serde::Serializer;

pub fn projective<S: Serializer>(p: &ProjectiveParam, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&p.to_string())
}

pub fn rational_pair<S: Serializer>(r: &[Rational; 2], s: S) -> Result<S::Ok, S::Error> {
    let mut t = s.serialize_tuple(2)?;
    t.serialize_element(&r[0].to_string())?;
    t.serialize_element(&r[1].to_string())?;
    t.end()
}

pub fn interval<S: Serializer>(i: &Interval, s: S) -> Result<S::Ok, S::Error> {
    let mut t = s.serialize_tuple(2)?;
    t.serialize_element(&i.lo())?;
    t.serialize_element(&i.hi())?;
    t.end()
}

pub fn interval_pair<S: Serializer>(p: &[Interval; 2], s: S) -> Result<S::Ok, S::Error> {
    let mut t = s.serialize_tuple(2)?;
    t.serialize_element(&[p[0].lo(), p[0].hi()])?;
    t.serialize_element(&[p[1].lo(), p[1].hi()])?;
    t.end()
}

pub fn rational<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

pub fn rationals<S: Serializer>(r: &[Rational], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(r.iter().map(|x| x.to_string()))
}

pub fn rational_rows<S: Serializer>(r: &[Vec<Rational>], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(r.iter().map(|row| row.iter().map(|x| x.to_string()).collect::<Vec<_>>()))
}
