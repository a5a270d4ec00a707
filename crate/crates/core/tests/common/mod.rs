#![allow(dead_code)]

pub mod todd_coxeter;
