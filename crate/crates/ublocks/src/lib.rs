//! Generic orders, isolated centralizers, e-split Levi subgroups, unipotent
//! character data and block tables for finite groups of exceptional Lie type.

pub mod blocks;
pub mod centralizers;
pub mod esplit;
pub mod generic_order;
pub mod partitions;
pub mod rational_type;
pub mod rootdata;
pub mod tables;
pub mod unipotent_db;
