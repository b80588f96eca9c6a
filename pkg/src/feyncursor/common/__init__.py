# Common configuration and run parameters
