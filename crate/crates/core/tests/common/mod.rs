#![allow(dead_code)]

pub mod corpus;
pub mod dual_oracle;
pub mod rule_oracle;
pub mod svm_fixtures;
