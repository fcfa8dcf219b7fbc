# Test suite for the TF phase-space toolkit
