pub mod cf;
pub mod cli;
pub mod exactnum;
pub mod forms;
pub mod geometry;
pub mod io;
pub mod perron;
pub mod render;
pub mod sail;
