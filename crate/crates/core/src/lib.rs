pub mod cosets;
pub mod exactalg;
pub mod facts;
pub mod obstructions;
pub mod petri;
pub mod pipeline;
pub mod qseries;
pub mod quadforms;
pub mod zmod;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/cosets.md")]
    mod cosets {}
    #[doc = include_str!("../../../book/src/quadrics.md")]
    mod quadrics {}
    #[doc = include_str!("../../../book/src/models.md")]
    mod models {}
    #[doc = include_str!("../../../book/src/quadforms.md")]
    mod quadforms {}
    #[doc = include_str!("../../../book/src/obstructions.md")]
    mod obstructions {}
    #[doc = include_str!("../../../book/src/facts.md")]
    mod facts {}
    #[doc = include_str!("../../../book/src/pipeline.md")]
    mod pipeline {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
