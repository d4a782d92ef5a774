import math
r = float(input())
area = math.pi * r ** 2
print(f"{area:.3f}")
