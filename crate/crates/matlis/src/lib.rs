pub mod exact;
pub mod quiver;
pub mod instances;
pub mod functor;
pub mod classify;
