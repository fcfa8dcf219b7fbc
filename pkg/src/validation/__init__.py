# Validation module for the TF phase-space toolkit
