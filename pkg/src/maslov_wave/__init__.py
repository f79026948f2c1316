"""Maslov index of traveling waves in skew-gradient reaction-diffusion systems."""
