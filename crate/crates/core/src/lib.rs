pub mod catalog;
pub mod cdsi;
pub mod oracle;
pub mod parallel;
pub mod scalar;
pub mod susy;
pub mod symbolic;
