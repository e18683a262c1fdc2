"""pfasst-fem source tree"""
