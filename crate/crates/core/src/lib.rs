pub mod algebra;
pub mod chains;
pub mod complex;
pub mod continuation;
pub mod cubical;
pub mod fibered;
pub mod fixtures;
pub mod flow;
pub mod gen;
pub mod io;
