n = 10
evens = 0
for k in range(n):
    if k % 2 == 1:
        continue
    evens += k
print(evens)
