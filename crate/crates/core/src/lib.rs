pub mod eval;
pub mod features;
pub mod io;
pub mod multilabel;
pub mod par;
pub mod pipeline;
pub mod sparse;
pub mod svm;
pub mod synthetic;
pub mod textprep;
