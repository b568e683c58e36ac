pub mod agreement;
pub mod correlate;
pub mod corpus;
pub mod retrieve;
pub mod score;
