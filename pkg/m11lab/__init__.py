# Verification and exploration toolkit for the M[11] family y^5 = x(x-1)(x-t)
