# Command-line harness for the TF phase-space toolkit
