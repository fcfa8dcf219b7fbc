# Phase-space calculus module for the TF phase-space toolkit
