"""
auxwave: symbolic and numeric engine for the auxiliary-equation method.

Pure Python on top of numpy/scipy; the Django layer lives in ``auxwave_data``.
"""
