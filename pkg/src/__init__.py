# TF phase-space toolkit
