"""Exact verification toolkit for LVMB data and their toric counterparts."""
