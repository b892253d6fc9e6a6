//! Chemistry core for the agent: a small molecular kernel, a descriptor
//! engine and the tool registry exposed to language models.

pub mod corpus;
pub mod descriptors;
pub mod molkit;
pub mod toolbox;
